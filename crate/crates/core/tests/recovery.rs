use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use srgg_core::data::{standardize, RawDataset};
use srgg_core::linalg::Matrix;
use srgg_core::mcmc::{run_two_block_chain, McmcConfig};

fn synthetic(n: usize, r: f64, seed: u64) -> RawDataset<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = || -> f64 { StandardNormal.sample(&mut rng) };
    let m = Matrix::from_fn(n, 3, |_, _| 0.0);
    let mut m = m;
    for i in 0..n {
        let (a, b, c) = (z(), z(), z());
        m[(i, 0)] = a;
        m[(i, 1)] = r * a + (1.0 - r * r).sqrt() * b;
        m[(i, 2)] = c;
    }
    RawDataset::unnamed(m).unwrap()
}

#[test]
fn strong_pair_recovered() {
    for seed in 0..3 {
        let d = standardize(&synthetic(500, 0.9, 100 + seed)).unwrap();
        let cfg = McmcConfig { n_iter: 5000, n_burnin: 1000, seed, ..McmcConfig::default() };
        let run = run_two_block_chain(&d, &cfg).unwrap();
        let nm = &run.marginals;
        assert!(nm.get(0, 1) >= 0.95);
        assert!(nm.get(0, 2) <= 0.2 && nm.get(1, 2) <= 0.2);
    }
}
