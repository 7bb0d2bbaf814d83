//! One-vs-one linear SVM on Gaussian clusters, plus a solver trace.
//!
//! cargo run --example ovo_svm

use periocular::svm::{train_binary_traced, train_ovo, OvoModel, SvmParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cluster(rng: &mut ChaCha8Rng, center: &[f64], n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            center
                .iter()
                .map(|c| {
                    // Sum of uniforms, roughly normal with sd 1.
                    c + (0..12).map(|_| rng.gen::<f64>()).sum::<f64>() - 6.0
                })
                .collect()
        })
        .collect()
}

fn main() -> periocular::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let centers = [("alpha", [0.0, 0.0, 0.0]), ("beta", [5.0, 0.0, 1.0]), ("gamma", [0.0, 5.0, -1.0]), ("delta", [5.0, 5.0, 0.0])];
    let (mut rows, mut labels) = (Vec::new(), Vec::new());
    for (name, c) in &centers {
        for r in cluster(&mut rng, c, 60) {
            rows.push(r);
            labels.push(name.to_string());
        }
    }

    let params = SvmParams::default();
    let model = train_ovo(&rows, &labels, &params)?;
    println!("classes {:?}, {} pair models", model.classes, model.pairs.len());

    let correct = rows
        .iter()
        .zip(&labels)
        .filter(|(r, l)| model.predict(r).map(|p| p == l.as_str()).unwrap_or(false))
        .count();
    println!("training accuracy {:.1}%", 100.0 * correct as f64 / rows.len() as f64);

    let p = model.predict_detailed(&[2.5, 2.5, 0.0])?;
    println!("ambiguous point -> {} votes {:?} strength {:?}", p.class, p.votes, p.strength);

    let json = model.to_json()?;
    let back = OvoModel::from_json(&json)?;
    assert_eq!(back, model);
    println!("model JSON round-trips ({} bytes)", json.len());

    // Binary trace: the dual decreases and the gap closes.
    let (x, y): (Vec<Vec<f64>>, Vec<f64>) = rows
        .iter()
        .zip(&labels)
        .filter(|(_, l)| l.as_str() == "alpha" || l.as_str() == "delta")
        .map(|(r, l)| (r.clone(), if l == "alpha" { 1.0 } else { -1.0 }))
        .unzip();
    let (_, trace) = train_binary_traced(&x, &y, &params)?;
    println!("epoch  updates        dual      primal         gap");
    let last = trace.epochs.len() - 1;
    for (i, e) in trace.epochs.iter().enumerate().filter(|(i, _)| i % 10 == 0 || *i == last) {
        println!("{i:5} {:8} {:11.5} {:11.5} {:11.3e}", e.updates, e.dual_objective, e.primal_objective, e.gap);
    }
    println!("converged: {}", trace.converged);
    Ok(())
}
