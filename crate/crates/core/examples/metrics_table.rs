//! Accuracy metrics from a pooled confusion matrix.
//!
//! cargo run --example metrics_table

use periocular::eval::{compute_metrics, round1, ConfusionMatrix, Expression};

fn main() -> periocular::Result<()> {
    // Per-class sample counts and recalls of a typical eight-class result.
    let counts = [593u64, 135, 54, 177, 75, 207, 84, 249];
    let recall = [88.7, 65.9, 16.7, 82.5, 29.3, 79.7, 45.2, 91.6];
    let mut m = ConfusionMatrix::new(counts.len());
    for (i, (&n, &r)) in counts.iter().zip(&recall).enumerate() {
        let hit = (n as f64 * r / 100.0).round() as u64;
        m.counts[i][i] = hit;
        // Misses go to the neutral column, or to the next class for neutral.
        m.counts[i][if i == 0 { 1 } else { 0 }] = n - hit;
    }
    let names: Vec<&str> = Expression::ALL.iter().map(|e| e.name()).collect();
    let metrics = compute_metrics(&m, &names)?;
    for (name, r) in names.iter().zip(&metrics.recalls) {
        println!("{name:>9} {:5.1}", r.map_or(f64::NAN, round1));
    }
    println!(
        "average {:.1}  overall {:.1}  min {:.1}",
        round1(metrics.average_acc),
        round1(metrics.overall_acc),
        round1(metrics.min_acc)
    );

    // A class with no test samples is skipped with a warning.
    let mut partial = m.clone();
    partial.counts[2] = vec![0; 8];
    let p = compute_metrics(&partial, &names)?;
    println!("without contempt samples: average {:.1} ({})", round1(p.average_acc), p.warnings.join("; "));
    Ok(())
}
