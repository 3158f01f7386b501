//! Unfold a half cylinder and compare `u` with the arc length `rho * phi`.
//!
//! `cargo run --example unfold_cylinder [out_dir]`

use std::error::Error;
use std::path::PathBuf;

use fpforge::finger3d::uvmap::write_uvmap;
use fpforge::finger3d::{unfold_cloud, DEFAULT_SLAB_MM};
use fpforge::px_per_mm;
use fpforge::synth::half_cylinder;

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&out)?;

    let rho = 6.0;
    let cloud = half_cylinder(rho, 20.0, 301, 81);
    let surface = unfold_cloud(&cloud, DEFAULT_SLAB_MM, 500.0)?;
    // uv comes out in pixels at the requested resolution
    let scale = px_per_mm(surface.ppi);

    let mut worst: f64 = 0.0;
    for (p, uv) in surface.points.iter().zip(&surface.uv_of_point) {
        if let Some([u, _]) = uv {
            let arc = rho * p.x.atan2(p.z);
            worst = worst.max((u / scale - arc).abs());
        }
    }
    let b = surface.bounds;
    println!("{} points in {} sections", surface.points.len(), surface.sections.len());
    println!("u in [{:.1}, {:.1}] px, v in [{:.1}, {:.1}] px", b.u_min, b.u_max, b.v_min, b.v_max);
    println!("unrolled width {:.3} mm", (b.u_max - b.u_min) / scale);
    println!("expected width pi * rho = {:.3} mm", std::f64::consts::PI * rho);
    println!("max |u - rho phi| = {worst:.2e} mm");

    let path = out.join("half_cylinder.uvmap");
    write_uvmap(&path, &surface)?;
    println!("wrote {}", path.display());
    Ok(())
}
