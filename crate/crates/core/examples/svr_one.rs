use proxy_align_core::model::{train_svr, LabeledExample, SvrConfig};
use proxy_align_core::text::DocVector;
use rand::{Rng, SeedableRng};

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let dim = 40usize;
    let noise_sd = 0.02;
    let w: Vec<f64> = (0..dim)
        .map(|j| if j < 5 { 5.0 * noise_sd } else if j < 10 { -5.0 * noise_sd } else { 0.0 })
        .collect();
    let mut examples = Vec::new();
    for i in 0..250 {
        let mut counts = Vec::new();
        let mut score = 0.45;
        for j in 0..dim {
            let c = if rng.gen_bool(0.3) { rng.gen_range(1..3u32) } else { 0 };
            if c > 0 {
                counts.push((j as u32, c));
                score += w[j] * c as f64;
            }
        }
        let label = (score + rng.gen_range(-noise_sd..noise_sd)).clamp(0.0, 1.0);
        examples.push(LabeledExample {
            proposal_id: format!("p{i}"),
            x: DocVector { doc_id: format!("p{i}"), counts },
            y: label,
        });
    }
    let t = std::time::Instant::now();
    let fit = train_svr(&examples, dim, 1.0, &SvrConfig::default());
    println!("C=1 -> {:?} time={:?}", fit.map(|f| (f.iterations, f.primal_objective)), t.elapsed());
}
