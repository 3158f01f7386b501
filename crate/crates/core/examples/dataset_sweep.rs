//! Small end-to-end batch: two identities, one of which fails the foreground
//! filter, rendered over the default nine-pose sweep.
//!
//! `cargo run --example dataset_sweep [out_dir]`

use std::error::Error;
use std::path::PathBuf;

use fpforge::finger3d::io::write_cloud;
use fpforge::imagecore::pgm::write_gray;
use fpforge::pipeline::{run_batch, BatchSpec, IdentityInput};
use fpforge::synth::{ridge_blob, tapered_finger};

fn main() -> Result<(), Box<dyn Error>> {
    let scratch = tempfile::tempdir()?;
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| scratch.path().join("dataset"));

    let cloud = scratch.path().join("finger.xyz");
    write_cloud(&cloud, &tapered_finger(5.0, 16.0, 0.05))?;
    let mut inputs = Vec::new();
    for (id, extent) in [("wide", 240.0), ("narrow", 90.0)] {
        let tex = scratch.path().join(format!("{id}.pgm"));
        write_gray(&tex, &ridge_blob(512, 512, 9.0, extent, extent))?;
        inputs.push(IdentityInput { identity_id: id.into(), texture_path: tex, cloud_path: cloud.clone(), rectified: false });
    }

    let spec = BatchSpec { seed: 11, workers: 2, ..Default::default() };
    let m = run_batch(&inputs, &spec, &out, None)?;
    for rec in &m.identities {
        let thetas: Vec<String> = rec.renders.iter().map(|r| format!("{:+}", r.theta)).collect();
        let fg = rec.filter.as_ref().map_or(f64::NAN, |f| f.foreground_ratio);
        println!("{:>7}: fg {fg:.3} passed={} [{}]", rec.identity_id, rec.passed_filter, thetas.join(" "));
    }
    println!("{} passed, {} filtered, {} failed, {} images", m.counts.passed, m.counts.filtered, m.counts.failed, m.counts.images);
    println!("manifest at {}", out.join("manifest.json").display());
    Ok(())
}
