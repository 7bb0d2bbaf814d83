//! Build the Gabor bank and probe it with oriented gratings.
//!
//! cargo run --example gabor_bank

use std::f64::consts::PI;

use periocular::descriptors::build_gabor_bank;
use periocular::descriptors::gabor_at_point;
use periocular::Image;

fn main() -> periocular::Result<()> {
    let bank = build_gabor_bank(5, 8, 0.25)?;
    let (nf, no) = bank.layout();
    println!("{} filters ({nf} frequencies x {no} orientations), max radius {}", bank.len(), bank.max_radius());
    for (i, f) in bank.frequencies().iter().enumerate() {
        println!("  f{i} = {f:.4} cycles/px");
    }

    // For a grating at (f, theta) the strongest channel should sit on that cell.
    for (fi, oi) in [(0, 0), (1, 2), (2, 5), (3, 7)] {
        let f = bank.frequencies()[fi];
        let theta = bank.orientations()[oi].to_radians();
        let img = Image::from_fn(96, 96, |x, y| {
            128.0 + 100.0 * (2.0 * PI * f * (x as f64 * theta.cos() + y as f64 * theta.sin())).cos()
        });
        let resp = gabor_at_point(&img, (48, 48), &bank)?;
        let best = (0..resp.len()).max_by(|&a, &b| resp[a].total_cmp(&resp[b])).unwrap();
        println!(
            "grating f={f:.4} theta={:5.1}: best channel {best:2} (expected {:2}) magnitude {:.1}",
            theta.to_degrees(),
            bank.channel(fi, oi),
            resp[best]
        );
    }
    Ok(())
}
