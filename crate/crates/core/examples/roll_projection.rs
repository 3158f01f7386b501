//! Render a textured phantom finger over a range of roll angles.
//!
//! `cargo run --example roll_projection [out_dir]`

use std::error::Error;
use std::path::PathBuf;

use fpforge::finger3d::{rectify_pose, unfold_cloud, DEFAULT_SLAB_MM};
use fpforge::imagecore::pgm::write_gray;
use fpforge::pipeline::theta_file_name;
use fpforge::poseproject::{render_pose, Canvas, RollPose};
use fpforge::synth::{ridge_blob, tapered_finger};

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&out)?;

    let cloud = rectify_pose(&tapered_finger(5.0, 16.0, 0.05))?;
    let surface = unfold_cloud(&cloud, DEFAULT_SLAB_MM, 500.0)?;
    let tex = ridge_blob(512, 512, 9.0, 240.0, 240.0);

    println!("{:>6} {:>10} {:>9}", "theta", "delta_u", "pixels");
    for deg in [-60.0, -30.0, 0.0, 30.0, 60.0] {
        let img = render_pose(&surface, &tex, RollPose::new(deg)?, Canvas::default())?;
        let shown = img.visibility_mask.count();
        println!("{deg:>6.0} {:>10.2} {shown:>9}", img.delta_u);
        write_gray(out.join(theta_file_name(deg)), &img.img)?;
    }
    println!("renders in {}", out.display());
    Ok(())
}
