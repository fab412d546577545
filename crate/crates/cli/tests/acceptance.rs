//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails on available inputs.

#![allow(clippy::needless_range_loop)]

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use srgg_core::bignet::{build_dense, build_large_network, build_streaming};
use srgg_core::data::{
    load_matrix_csv, standardize, subsample_rows, IngestConfig, PreRanked, RawDataset, StandardizedDataset,
};
use srgg_core::distance::{distance_report, DistanceOptions};
use srgg_core::linalg::{Matrix, RidgeConfig, SpdMatrix};
use srgg_core::mcmc::{build_graphical_model, run_two_block_chain, GraphicalModel, McmcConfig};
use srgg_core::posterior::{marginalized_log_posterior, MarginalPosteriorConfig};
use srgg_core::srgg::{
    distance_at_separation, edge_marginal, normal_pair_distance, partial_correlation, validate_point_process,
    EdgeInput, PointProcessParams,
};

const QUADRATURE_TOL: f64 = 1e-8;
const DNN_TOL: f64 = 1e-12;
const PARTIAL_TOL: f64 = 1e-8;
const LOG_RATIO_REL_TOL: f64 = 0.05;
const IS_DRAWS: usize = 1_000_000;
const RECOVERY_STRONG: f64 = 0.95;
const RECOVERY_WEAK: f64 = 0.2;
const RECOVERY_SEEDS_NEEDED: usize = 9;
const POISSON_Z: f64 = 4.0;
const POISSON_TRIALS: usize = 10_000;
const HPD_TAU: f64 = 0.05;
const SPEARMAN_PAIRS_PER_SEC: f64 = 1e6;

type Criterion = (&'static str, u64, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    /// The criterion could not be evaluated because an input file is missing.
    unavailable: bool,
}

impl Outcome {
    fn check(pass: bool, detail: String) -> Self {
        Self { pass, detail, unavailable: false }
    }
}

// Adaptive Simpson on [a, b].
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * eps {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, eps, 50)
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..=20 {
        let r = k as f64 / 20.0;
        for g in [false, true] {
            let d = (if g { 1.0 } else { 0.0 } - r).abs();
            // υ = t² removes the 1/√υ endpoint singularity.
            let f = |t: f64| {
                if t == 0.0 {
                    if d == 0.0 {
                        2.0 / (2.0 * std::f64::consts::PI).sqrt()
                    } else {
                        0.0
                    }
                } else {
                    2.0 / (2.0 * std::f64::consts::PI).sqrt() * (-d * d / (2.0 * t * t)).exp()
                }
            };
            let quad = simpson(&f, 0.0, 1.0, 1e-13);
            let closed = edge_marginal(&EdgeInput::new(g, r).unwrap());
            worst = worst.max((quad - closed).abs());
        }
    }
    Outcome::check(worst <= QUADRATURE_TOL, format!("max |closed - quadrature| = {worst:.3e}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sigma = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (a, b): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let lhs = normal_pair_distance(a, b, sigma).unwrap();
        let rhs = distance_at_separation((a - b).abs());
        worst = worst.max((lhs - rhs).abs());
    }
    Outcome::check(worst <= DNN_TOL, format!("max gap {worst:.3e} over 10^4 pairs"))
}

fn random_trace(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let lo: f64 = rng.gen_range(-200.0..-20.0);
    let hi: f64 = rng.gen_range(lo + 1.0..-0.5);
    (0..len).map(|_| rng.gen_range(lo..hi)).collect()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = |x: f64, y: f64| distance_at_separation((x - y).abs());
    let (mut asym, mut tri) = (0usize, 0usize);
    for _ in 0..10_000 {
        let (a, b, c): (f64, f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if d(a, b) != d(b, a) {
            asym += 1;
        }
        if d(a, c) > d(a, b) + d(b, c) + 1e-14 {
            tri += 1;
        }
    }
    let (mut self_bad, mut sym_bad, mut neg) = (0usize, 0usize, 0usize);
    let burnin = 50;
    for _ in 0..100 {
        let (u, v) = (random_trace(&mut rng, 300), random_trace(&mut rng, 300));
        let opts = DistanceOptions::default();
        let aa = distance_report(&u, burnin, &u, burnin, opts).unwrap();
        let ab = distance_report(&u, burnin, &v, burnin, opts).unwrap();
        let ba = distance_report(&v, burnin, &u, burnin, opts).unwrap();
        if aa.delta != 0.0 {
            self_bad += 1;
        }
        if (ab.delta - ba.delta).abs() > 1e-12 * ab.delta.abs().max(1.0) {
            sym_bad += 1;
        }
        if ab.delta.is_nan() || ab.delta < 0.0 {
            neg += 1;
        }
    }
    let pass = asym + tri + self_bad + sym_bad + neg == 0;
    Outcome::check(
        pass,
        format!("asymmetric {asym}, triangle violations {tri}; delta: self {self_bad}, asymmetric {sym_bad}, negative {neg}"),
    )
}

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &v)| v).collect())
                .collect();
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][c] * cofactor_det(&minor)
        })
        .sum()
}

fn cofactor_inverse(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let det = cofactor_det(m);
    let mut inv = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<f64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &v)| v).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            inv[i][j] = sign * cofactor_det(&minor) / det;
        }
    }
    inv
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let p = 2 + k % 5;
        let a: Vec<Vec<f64>> = (0..p).map(|_| (0..p).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
        let s: Vec<Vec<f64>> = (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| (0..p).map(|l| a[i][l] * a[j][l]).sum::<f64>() + if i == j { 0.5 } else { 0.0 })
                    .collect()
            })
            .collect();
        let psi = cofactor_inverse(&s);
        let got =
            partial_correlation(&SpdMatrix::new(Matrix::from_rows(&s)).unwrap(), &RidgeConfig::default()).unwrap();
        for i in 0..p {
            for j in 0..p {
                let want = if i == j { 1.0 } else { -psi[i][j] / (psi[i][i] * psi[j][j]).sqrt() };
                worst = worst.max((got.get(i, j) - want).abs());
            }
        }
    }
    Outcome::check(worst <= PARTIAL_TOL, format!("max gap {worst:.3e} over 1000 matrices, p in 2..=6"))
}

fn criterion_5() -> Outcome {
    let d = Matrix::from_rows(&[vec![1.0, 0.3], vec![-0.5, 0.8]]);
    let data = StandardizedDataset::from_standardized(d.clone(), vec!["a".into(), "b".into()]);
    let sig_a = SpdMatrix::identity(2);
    let sig_b = SpdMatrix::new(Matrix::from_rows(&[vec![1.0, 0.6], vec![0.6, 1.0]])).unwrap();
    let cfg = MarginalPosteriorConfig::default();
    let exact = marginalized_log_posterior(&data, &sig_a, &cfg).unwrap()
        - marginalized_log_posterior(&data, &sig_b, &cfg).unwrap();

    // Ψ = D Σ⁻¹ Dᵀ for each Σ_C.
    let psi = |s: &SpdMatrix<f64>| {
        let m = s.matrix();
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let inv = [[m[(1, 1)] / det, -m[(0, 1)] / det], [-m[(1, 0)] / det, m[(0, 0)] / det]];
        let mut out = [[0.0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[r][c] += d[(r, k)] * inv[k][l] * d[(c, l)];
                    }
                }
            }
        }
        (out, det)
    };
    let min_eig = |m: &[[f64; 2]; 2]| {
        let (t, dt) = (m[0][0] + m[1][1], m[0][0] * m[1][1] - m[0][1] * m[1][0]);
        0.5 * t - (0.25 * t * t - dt).max(0.0).sqrt()
    };
    let (psi_a, det_a) = psi(&sig_a);
    let (psi_b, det_b) = psi(&sig_b);
    // Proposal Σ_R ~ IW(3, c I), so Σ_R⁻¹ ~ Wishart(3, I/c). With c below the
    // smallest eigenvalue of both Ψ the weights exp(-½ tr((Ψ - cI) Σ_R⁻¹)) are bounded.
    let c = 0.5 * min_eig(&psi_a).min(min_eig(&psi_b));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (chi3, chi2) = (ChiSquared::new(3.0f64).unwrap(), ChiSquared::new(2.0f64).unwrap());
    let (mut wa, mut wb) = (0.0f64, 0.0f64);
    for _ in 0..IS_DRAWS {
        let a11 = chi3.sample(&mut rng).sqrt();
        let a22 = chi2.sample(&mut rng).sqrt();
        let a21: f64 = StandardNormal.sample(&mut rng);
        let w = [[a11 * a11 / c, a11 * a21 / c], [a11 * a21 / c, (a21 * a21 + a22 * a22) / c]];
        let tr = |p: &[[f64; 2]; 2]| (p[0][0] - c) * w[0][0] + 2.0 * p[0][1] * w[0][1] + (p[1][1] - c) * w[1][1];
        wa += (-0.5 * tr(&psi_a)).exp();
        wb += (-0.5 * tr(&psi_b)).exp();
    }
    // Integrand |Σ_R|^{-n/2} exp(-½ tr(Σ_R⁻¹ Ψ)) |Σ_R|^{-n/2-1}, times |Σ_C|^{-p/2}.
    let is = (-det_a.ln() + wa.ln()) - (-det_b.ln() + wb.ln());
    let rel = (is - exact).abs() / exact.abs();
    Outcome::check(
        rel <= LOG_RATIO_REL_TOL,
        format!("log ratio closed form {exact:.5}, importance sampled {is:.5}, relative gap {rel:.2e}"),
    )
}

fn synthetic(n: usize, r: f64, seed: u64) -> RawDataset<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(n, 3);
    for i in 0..n {
        let (a, b, c): (f64, f64, f64) =
            (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
        m[(i, 0)] = a;
        m[(i, 1)] = r * a + (1.0 - r * r).sqrt() * b;
        m[(i, 2)] = c;
    }
    RawDataset::unnamed(m).unwrap()
}

fn criterion_6() -> Outcome {
    let mut ok = 0;
    let mut worst = (1.0f64, 0.0f64);
    for seed in 0..10u64 {
        let d = standardize(&synthetic(500, 0.9, 1000 + seed)).unwrap();
        let cfg = McmcConfig { n_iter: 5000, n_burnin: 1000, seed, ..McmcConfig::default() };
        let nm = run_two_block_chain(&d, &cfg).unwrap().marginals;
        let (n12, weak) = (nm.get(0, 1), nm.get(0, 2).max(nm.get(1, 2)));
        worst = (worst.0.min(n12), worst.1.max(weak));
        if n12 >= RECOVERY_STRONG && weak <= RECOVERY_WEAK {
            ok += 1;
        }
    }
    Outcome::check(
        ok >= RECOVERY_SEEDS_NEEDED,
        format!("{ok}/10 seeds recovered; min n12 {:.4}, max n13/n23 {:.4}", worst.0, worst.1),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = 8;
    let mut marg = Matrix::zeros(p, p);
    for i in 0..p {
        for j in (i + 1)..p {
            let v: f64 = rng.gen_range(0.0..0.8);
            marg[(i, j)] = v;
            marg[(j, i)] = v;
        }
    }
    let means: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mut lines = Vec::new();
    let mut pass = true;
    for (k, &(a, tau)) in [(0.5, 0.05), (1.0, 0.3), (2.0, 0.6)].iter().enumerate() {
        let params = PointProcessParams::srgg(means.clone(), tau).unwrap();
        let rep = validate_point_process(&params, k, &marg, a, POISSON_TRIALS, 70 + k as u64).unwrap();
        pass &= rep.z.abs() <= POISSON_Z && rep.q > 0;
        lines.push(format!("a={a} tau={tau} Q={} z={:.2}", rep.q, rep.z));
    }
    Outcome::check(pass, lines.join("; "))
}

fn wine_dir() -> PathBuf {
    std::env::var_os("SRGG_WINE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data"))
}

fn canonical_label(s: &str) -> String {
    let l: String =
        s.trim().trim_matches('"').to_lowercase().chars().map(|c| if c.is_alphanumeric() { c } else { '_' }).collect();
    if l == "class" {
        "quality".into()
    } else {
        l
    }
}

fn learn_wine(path: &Path, seed: u64) -> (GraphicalModel, Vec<f64>, usize) {
    let raw = load_matrix_csv::<f64>(path, &IngestConfig::default()).unwrap();
    let raw = subsample_rows(&raw, 300, seed).unwrap();
    let mut data = standardize(&raw).unwrap();
    data.column_names = data.column_names.iter().map(|s| canonical_label(s)).collect();
    let cfg = McmcConfig { seed, ..McmcConfig::default() };
    let run = run_two_block_chain(&data, &cfg).unwrap();
    let gm = build_graphical_model(&run.marginals, &data.column_names, HPD_TAU);
    (gm, run.trace.log_u(), cfg.n_burnin)
}

const WHITE_EDGES: [(&str, &str); 5] = [
    ("free_sulfur_dioxide", "total_sulfur_dioxide"),
    ("residual_sugar", "density"),
    ("density", "alcohol"),
    ("alcohol", "quality"),
    ("volatile_acidity", "quality"),
];

fn criterion_8() -> Outcome {
    let dir = wine_dir();
    let (red, white) = (dir.join("winequality-red.csv"), dir.join("winequality-white.csv"));
    if !red.exists() || !white.exists() {
        let absent: Vec<String> =
            [&red, &white].iter().filter(|p| !p.exists()).map(|p| p.display().to_string()).collect();
        let mut detail = format!("input unavailable: {} not found", absent.join(", "));
        if red.exists() {
            let (gm, _, _) = learn_wine(&red, 8);
            let found = WHITE_EDGES.iter().filter(|(a, b)| gm.has_edge(a, b)).count();
            detail.push_str(&format!("; red alone: {} HPD edges, {found}/5 listed edges present", gm.edges.len()));
        }
        return Outcome { pass: false, detail, unavailable: true };
    }
    let (gm_w, lu_w, b_w) = learn_wine(&white, 8);
    let (_, lu_r, b_r) = learn_wine(&red, 8);
    let missing: Vec<String> =
        WHITE_EDGES.iter().filter(|(a, b)| !gm_w.has_edge(a, b)).map(|(a, b)| format!("{a}-{b}")).collect();
    let rep = distance_report(&lu_w, b_w, &lu_r, b_r, DistanceOptions::default()).unwrap();
    let populated = [rep.scale, rep.d_hellinger, rep.d_bhattacharyya, rep.delta, rep.abs_corr, rep.log_odds_mean]
        .iter()
        .all(|v| v.is_finite());
    let pass = missing.is_empty()
        && rep.d_hellinger > 0.0
        && rep.d_hellinger < 1.0
        && rep.d_max.iter().all(|&m| m > 0.0)
        && rep.delta > 0.0
        && populated;
    Outcome::check(
        pass,
        format!(
            "missing edges {missing:?}; D_H {:.4}, D_max {:?}, delta {:.4}, s {:.3}, O mean {:.3}",
            rep.d_hellinger, rep.d_max, rep.delta, rep.scale, rep.log_odds_mean
        ),
    )
}

fn unit_vector_correlation(p: usize, k: usize, seed: u64) -> Matrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<Vec<f64>> = (0..p)
        .map(|_| {
            let v: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.into_iter().map(|a| a / n).collect()
        })
        .collect();
    Matrix::from_fn(p, p, |i, j| {
        if i == j {
            1.0
        } else {
            x[i].iter().zip(&x[j]).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0)
        }
    })
}

fn criterion_9() -> Outcome {
    let corr = unit_vector_correlation(1000, 8, 9);
    let labels: Vec<String> = (0..1000).map(|i| format!("v{i}")).collect();
    let taus = [0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7];
    let counts: Vec<usize> =
        taus.iter().map(|&t| build_large_network(&corr, t, &labels).unwrap().edges.len()).collect();
    let monotone = counts.windows(2).all(|w| w[1] <= w[0]) && counts[0] == 1000 * 999 / 2;

    let small = unit_vector_correlation(500, 6, 10);
    let agree = [0.0, 0.1, 0.3, 0.6].iter().all(|&t| {
        build_dense(&small, t, &labels[..500]).unwrap() == build_streaming(&small, t, &labels[..500]).unwrap()
    });

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (rows, len) = (1500, 1000);
    let scores = Matrix::from_fn(rows, len, |_, _| rng.gen::<f64>());
    let start = Instant::now();
    let ranked = PreRanked::from_rows(&scores).unwrap();
    let hits = ranked.pairs_filter_map(|_, _, s| (s.abs() > 0.2).then_some(())).len();
    let secs = start.elapsed().as_secs_f64();
    let pairs = (rows * (rows - 1) / 2) as f64;
    let rate = pairs / secs;
    Outcome::check(
        monotone && agree && rate >= SPEARMAN_PAIRS_PER_SEC,
        format!(
            "edge counts {counts:?}; dense == streaming: {agree}; Spearman {:.2}M pairs/s ({hits} above 0.2)",
            rate / 1e6
        ),
    )
}

fn learn_once(out: &Path, extra: &[&str]) -> bool {
    let input = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/winequality-red.csv");
    Command::new(env!("CARGO_BIN_EXE_srgg"))
        .args(["learn", "--rows", "300", "--iters", "3000", "--burnin", "1000", "--seed", "10"])
        .args(["--format", "dot,graphml,json,csv", "--prefix", "run"])
        .arg("--input")
        .arg(&input)
        .arg("--out-dir")
        .arg(out)
        .args(extra)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn criterion_10() -> Outcome {
    let dirs: Vec<tempfile::TempDir> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let ran = learn_once(dirs[0].path(), &[])
        && learn_once(dirs[1].path(), &[])
        && learn_once(dirs[2].path(), &["--threads", "1"]);
    if !ran {
        return Outcome::check(false, "learn exited with an error".into());
    }
    let files = ["run.trace.csv", "run.dot", "run.graphml", "run.graph.json", "run.edges.csv", "run.meta.json"];
    let differing: Vec<&str> = files
        .iter()
        .filter(|f| {
            let a = std::fs::read(dirs[0].path().join(f)).ok();
            a.is_none()
                || a != std::fs::read(dirs[1].path().join(f)).ok()
                || a != std::fs::read(dirs[2].path().join(f)).ok()
        })
        .copied()
        .collect();
    Outcome::check(
        differing.is_empty(),
        format!("{} files compared across 3 runs; differing {differing:?}", files.len()),
    )
}

fn main() {
    let strict = std::env::var_os("SRGG_ACCEPT_STRICT").is_some();
    let criteria: [Criterion; 10] = [
        ("closed-form marginal vs quadrature", 1, criterion_1),
        ("D_NN correspondence", 1, criterion_2),
        ("metric axioms", 5, criterion_3),
        ("partial-correlation oracle", 5, criterion_4),
        ("marginalized-posterior oracle", 60, criterion_5),
        ("synthetic recovery", 120, criterion_6),
        ("Poisson intensity", 30, criterion_7),
        ("wine pipeline", 900, criterion_8),
        ("large-network properties", 300, criterion_9),
        ("determinism", 120, criterion_10),
    ];
    let mut fatal = 0;
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*budget);
        let pass = out.pass && in_time;
        println!(
            "{} {:>2} {name} ({:.2}s of {budget}s): {}{}",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            took.as_secs_f64(),
            out.detail,
            if in_time { "" } else { " [over time budget]" }
        );
        if !pass && (strict || !out.unavailable) {
            fatal += 1;
        }
    }
    if fatal > 0 {
        eprintln!("{fatal} acceptance criteria failed");
        std::process::exit(1);
    }
}
