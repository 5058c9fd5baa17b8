//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dtigra::experiment::{self, ExperimentConfig, SolverChoice};
use dtigra::operators::{AutoconvOp, ComposedForward, DenseLinear, ForwardOperator, HaarSynthesis};
use dtigra::seqspace::{bregman_fp, bregman_fq_dual, duality_map_p, duality_map_q, lp_norm};
use dtigra::signal::l2_inner;
use dtigra::solvers::{dtigra_solve, dual_step, theoretical_step_size, DtigraConfig, StopReason};
use dtigra::theory::{alpha_star, gamma, qbar0, tau_discrepancy, AssumptionParams, TheoryConstants};
use dtigra::{CoefVec, Exponent, ProblemInstance, Signal};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rand_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

fn duality_inversion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for p in [1.2, 1.5, 1.6, 2.0] {
        let e = Exponent::new(p).unwrap();
        for _ in 0..1000 {
            // Entries spread over many magnitudes, including exact zeros and tiny values.
            let x: Vec<f64> = (0..512)
                .map(|i| {
                    if i % 97 == 0 {
                        return 0.0;
                    }
                    let m = 10f64.powf(rng.random_range(-12.0..4.0));
                    if rng.random_bool(0.5) { m } else { -m }
                })
                .collect();
            let x = CoefVec::new(x).unwrap();
            let back = duality_map_q(&duality_map_p(&x, e), e);
            for (a, b) in back.iter().zip(x.iter()) {
                let err = if b.abs() > 1e-8 { (a - b).abs() / b.abs() } else { (a - b).abs() };
                worst = worst.max(err);
            }
        }
    }
    outcome(worst <= 1e-12, format!("max error {worst:.2e} (tol 1e-12)"))
}

fn adjoint_exactness() -> Outcome {
    let n = 512;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let op = ComposedForward::with_levels(9).unwrap();
    let g = AutoconvOp::new(n).unwrap();
    let t = HaarSynthesis::new(9).unwrap();
    let (mut wf, mut wg, mut wt) = (0f64, 0f64, 0f64);
    for _ in 0..100 {
        let x = CoefVec::new(rand_vec(&mut rng, n, -1.0, 1.0)).unwrap();
        let h = CoefVec::new(rand_vec(&mut rng, n, -1.0, 1.0)).unwrap();
        let w = Signal::new(rand_vec(&mut rng, n, -1.0, 1.0)).unwrap();
        let lhs = l2_inner(&op.derivative(&x, &h).unwrap(), &w).unwrap();
        let rhs = op.adjoint_derivative(&x, &w).unwrap().pair(&h).unwrap();
        wf = wf.max((lhs - rhs).abs() / (1.0 + lhs.abs()));

        let f = Signal::new(rand_vec(&mut rng, n, -1.0, 1.0)).unwrap();
        let u = Signal::new(rand_vec(&mut rng, n, -1.0, 1.0)).unwrap();
        let lhs = l2_inner(&g.derivative(&f, &u).unwrap(), &w).unwrap();
        let rhs = l2_inner(&u, &g.adjoint(&f, &w).unwrap()).unwrap();
        wg = wg.max((lhs - rhs).abs() / (1.0 + lhs.abs()));

        let lhs = l2_inner(&t.synthesize(&h).unwrap(), &w).unwrap();
        let rhs: f64 = t.analyze(&w).unwrap().iter().zip(h.iter()).map(|(a, b)| a * b).sum();
        wt = wt.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    let worst = wf.max(wg).max(wt);
    outcome(worst <= 1e-12, format!("F {wf:.1e}, G' {wg:.1e}, T {wt:.1e} (tol 1e-12)"))
}

fn gradient_consistency() -> Outcome {
    let eps = 1e-6;
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let op = ComposedForward::with_levels(6).unwrap();
    for p in [1.6, 2.0] {
        let data = Signal::new(rand_vec(&mut rng, 64, -1.0, 1.0)).unwrap();
        let prob = ProblemInstance::new(op, data, 0.01, Exponent::new(p).unwrap()).unwrap();
        for _ in 0..50 {
            let x: Vec<f64> = (0..64)
                .map(|_| {
                    let m = rng.random_range(0.1..1.0);
                    if rng.random_bool(0.5) { m } else { -m }
                })
                .collect();
            let x = CoefVec::new(x).unwrap();
            let h = CoefVec::new(rand_vec(&mut rng, 64, -1.0, 1.0)).unwrap();
            let alpha = rng.random_range(0.01..1.0);
            let g = prob.phi_gradient(alpha, &x).unwrap().pair(&h).unwrap();
            let plus = prob.phi_value(alpha, &x.add_scaled(eps, &h).unwrap()).unwrap();
            let minus = prob.phi_value(alpha, &x.add_scaled(-eps, &h).unwrap()).unwrap();
            let fd = (plus - minus) / (2.0 * eps);
            worst = worst.max((g - fd).abs() / (1.0 + g.abs()));
        }
    }
    outcome(worst <= 1e-5, format!("max relative deviation {worst:.2e} (tol 1e-5)"))
}

fn bregman_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut cross, mut lower_gap) = (0f64, f64::INFINITY);
    for i in 0..1000 {
        let p = [1.2, 1.5, 1.6, 2.0][i % 4];
        let e = Exponent::new(p).unwrap();
        let x = CoefVec::new(rand_vec(&mut rng, 16, -2.0, 2.0)).unwrap();
        let z = CoefVec::new(rand_vec(&mut rng, 16, -2.0, 2.0)).unwrap();
        let d = bregman_fp(&z, &x, e).unwrap();
        let dq = bregman_fq_dual(&duality_map_p(&x, e), &duality_map_p(&z, e), e).unwrap();
        cross = cross.max((d - dq).abs() / d.abs().max(1e-300));
        // Lower bound with c₁ = ‖x‖_p and c₂ = ‖x − z‖_p.
        let diff = lp_norm(&x.sub(&z).unwrap(), e);
        let lb = (p - 1.0) / 2.0 * (lp_norm(&x, e) + diff).powf(p - 2.0) * diff * diff;
        lower_gap = lower_gap.min(d - lb);
    }
    outcome(
        cross <= 1e-10 && lower_gap >= -1e-10,
        format!("cross identity rel {cross:.1e} (tol 1e-10), lower-bound min slack {lower_gap:.1e} (tol -1e-10)"),
    )
}

/// Linear test problem: `m = 4`, data-space product `(1/m)Σ`, `y^δ = A x† + e` with `‖e‖ = δ`.
struct Linear {
    a: DenseLinear<f64>,
    mat: DMatrix<f64>,
    y_delta: DVector<f64>,
    delta: f64,
}

fn linear_problem(seed: u64, delta: f64, x_true: Option<DVector<f64>>) -> Linear {
    let m = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<f64> = (0..m * m)
        .map(|i| if i % (m + 1) == 0 { 2.0 } else { 0.0 } + rng.random_range(-0.5..0.5))
        .collect();
    let mat = DMatrix::from_row_slice(m, m, &entries);
    let x_true = x_true.unwrap_or_else(|| DVector::from_vec(vec![1.0, -0.5, 0.25, 2.0]));
    let noise = DVector::from_vec(rand_vec(&mut rng, m, -1.0, 1.0));
    let noise = &noise * (delta / (noise.norm() / (m as f64).sqrt()));
    let y_delta = &mat * &x_true + noise;
    Linear {
        a: DenseLinear::new(m, m, entries).unwrap(),
        mat,
        y_delta,
        delta,
    }
}

impl Linear {
    fn instance(&self) -> ProblemInstance<f64, DenseLinear<f64>> {
        let y = Signal::new(self.y_delta.iter().copied().collect()).unwrap();
        ProblemInstance::new(self.a.clone(), y, self.delta, Exponent::new(2.0).unwrap()).unwrap()
    }

    /// `((1/m)AᵀA + αI)⁻¹ (1/m)Aᵀ y^δ`.
    fn minimizer(&self, alpha: f64) -> DVector<f64> {
        let m = self.mat.nrows() as f64;
        let lhs = self.mat.transpose() * &self.mat / m + DMatrix::identity(self.mat.ncols(), self.mat.ncols()) * alpha;
        let rhs = self.mat.transpose() * &self.y_delta / m;
        lhs.lu().solve(&rhs).expect("regular system")
    }

    fn weighted_norm(&self, v: &DVector<f64>) -> f64 {
        v.norm() / (self.mat.nrows() as f64).sqrt()
    }
}

fn convex_oracle() -> Outcome {
    let lin = linear_problem(5, 1e-3, None);
    let prob = lin.instance();
    let e = prob.exponent();
    let alpha = 0.05;
    let x_star = CoefVec::new(lin.minimizer(alpha).iter().copied().collect()).unwrap();
    let k_bound = lin.a.operator_norm();
    let params = AssumptionParams {
        c: 0.05,
        lipschitz: 0.01,
        s: 3.0,
        varrho: 1.0,
        delta: lin.delta,
        k_bound,
        a_bound: 3.0,
        p: e,
    };
    let tc = TheoryConstants::new(params, 1.0, 0.7, 1.5).unwrap();
    let mut x = CoefVec::new(vec![0.3, 0.3, -0.2, 0.1]).unwrap();
    let mut d_prev = bregman_fp(&x_star, &x, e).unwrap();
    let mut phi_prev = prob.phi_value(alpha, &x).unwrap();
    let (mut breg_ok, mut phi_ok) = (true, true);
    for _ in 0..200 {
        let beta = theoretical_step_size(&prob, alpha, &x, &tc).unwrap();
        x = dual_step(&prob, alpha, &x, beta).unwrap();
        let d = bregman_fp(&x_star, &x, e).unwrap();
        let phi = prob.phi_value(alpha, &x).unwrap();
        breg_ok &= d <= d_prev + 1e-12;
        phi_ok &= phi <= phi_prev + 1e-12;
        d_prev = d;
        phi_prev = phi;
    }
    let cfg = DtigraConfig {
        alpha0: 1.0,
        ..DtigraConfig::default()
    };
    let run = dtigra_solve(&prob, &CoefVec::new(vec![0.3, 0.3, -0.2, 0.1]).unwrap(), &cfg).unwrap();
    let disc_ok = run.stop_reason() == StopReason::Discrepancy && run.residual <= cfg.tau * lin.delta;
    outcome(
        breg_ok && phi_ok && disc_ok,
        format!(
            "Bregman monotone {breg_ok}, Phi monotone {phi_ok}, final D {d_prev:.1e}; solve {} residual {:.2e} <= {:.1e}",
            run.stop_reason(),
            run.residual,
            cfg.tau * lin.delta
        ),
    )
}

fn residual_bound() -> Outcome {
    // Source element ω gives x† = A*ω = (1/m)Aᵀω, so J_2(x†) = F'(x†)*ω.
    let omega = DVector::from_vec(vec![0.4, -0.2, 0.3, 0.1]);
    let base = linear_problem(6, 1e-3, None);
    let x_true = base.mat.transpose() * &omega / 4.0;
    let lin = linear_problem(6, 1e-3, Some(x_true));
    let omega_norm = lin.weighted_norm(&omega);
    let params = AssumptionParams {
        c: 0.1,
        lipschitz: 0.1,
        s: 3.0,
        varrho: omega_norm,
        delta: lin.delta,
        k_bound: 1.0,
        a_bound: 1.0,
        p: Exponent::new(2.0).unwrap(),
    };
    let star = alpha_star(&params).unwrap();
    let mut worst = f64::INFINITY;
    for i in 0..10 {
        let alpha = star * 3f64.powi(i);
        let x = lin.minimizer(alpha);
        let res = lin.weighted_norm(&(&lin.mat * x - &lin.y_delta));
        worst = worst.min(2.0 * alpha * omega_norm + lin.delta + 1e-10 - res);
    }
    outcome(worst >= 0.0, format!("alpha* = {star:.3e}, min slack {worst:.2e} over 10 values"))
}

fn table1_cells() -> Vec<(f64, f64, f64)> {
    // (noise, p, reported error)
    vec![
        (0.05, 1.2, 0.58),
        (0.05, 1.6, 0.33),
        (0.01, 1.2, 0.20),
        (0.01, 1.6, 0.22),
        (0.005, 1.2, 0.13),
        (0.005, 1.6, 0.15),
    ]
}

fn table1_reproduction() -> Outcome {
    let cells = table1_cells();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = cells
            .iter()
            .map(|&(noise, p, _)| {
                s.spawn(move || {
                    let cfg = ExperimentConfig {
                        noise,
                        p,
                        start_norm: 1.0,
                        ..ExperimentConfig::default()
                    };
                    experiment::run(&cfg)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut pass = true;
    let mut parts = Vec::new();
    for ((noise, p, paper), r) in cells.iter().zip(results) {
        match r {
            Ok(r) => {
                let e = r.relative_error.unwrap();
                let ok = r.stop_reason() == StopReason::Discrepancy
                    && e >= paper / 2.0
                    && e <= paper * 2.0
                    && (40..=70).contains(&r.j_star);
                pass &= ok;
                parts.push(format!(
                    "{}%/p={p}: j*={} k*={} e={e:.3} [{}]",
                    noise * 100.0,
                    r.j_star,
                    r.k_star,
                    if ok { "ok" } else { "out of band" }
                ));
            }
            Err(err) => {
                pass = false;
                parts.push(format!("{}%/p={p}: error {err}", noise * 100.0));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn landweber_ordering() -> Outcome {
    let cell = |solver: SolverChoice, start_norm: f64| ExperimentConfig {
        noise: 0.05,
        p: 1.2,
        start_norm,
        solver,
        ..ExperimentConfig::default()
    };
    let dt = SolverChoice::Dtigra(DtigraConfig::default());
    let lw = SolverChoice::landweber_default();
    let configs = [cell(lw, 1.0), cell(dt, 1.0), cell(lw, 1e4), cell(dt, 1e4)];
    let runs: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|c| s.spawn(move || experiment::run(c))).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let [lw1, dt1, lw4, dt4] = match <[_; 4]>::try_from(runs) {
        Ok(a) => a,
        Err(_) => unreachable!(),
    };
    let (lw1, dt1, lw4, dt4) = match (lw1, dt1, lw4, dt4) {
        (Ok(a), Ok(b), Ok(c), Ok(d)) => (a, b, c, d),
        (a, b, c, d) => {
            let errs: Vec<String> = [a.err(), b.err(), c.err(), d.err()].into_iter().flatten().map(|e| e.to_string()).collect();
            return outcome(false, format!("run failed: {}", errs.join("; ")));
        }
    };
    let e_lw = lw1.relative_error.unwrap();
    let e_dt = dt1.relative_error.unwrap();
    let ordering = e_lw > e_dt;
    let lw_fails = lw4.stop_reason() != StopReason::Discrepancy && lw4.k_star >= 200_000;
    let dt_meets = dt4.stop_reason() == StopReason::Discrepancy;
    outcome(
        ordering && lw_fails && dt_meets,
        format!(
            "|x0|=1: Landweber e={e_lw:.3} (k*={}, {}) vs d-TIGRA e={e_dt:.3}; |x0|=1e4: Landweber {} after {} iterations, d-TIGRA {} (j*={}, e={:.3})",
            lw1.k_star,
            lw1.stop_reason(),
            lw4.stop_reason(),
            lw4.k_star,
            dt4.stop_reason(),
            dt4.j_star,
            dt4.relative_error.unwrap()
        ),
    )
}

fn constants_calculator() -> Outcome {
    let mk = |c: f64, s: f64, varrho: f64, delta: f64| AssumptionParams {
        c,
        lipschitz: 1.0,
        s,
        varrho,
        delta,
        k_bound: 1.0,
        a_bound: 1.0,
        p: Exponent::new(1.5).unwrap(),
    };
    // (params, qbar for τ, expected α*, γ, q̄₀, τ)
    let cases = [
        (mk(1.0, 3.0, 0.1, 0.01), 0.7, 0.1, 0.35, 0.6 / 1.3, 2.0 + 2.0 / 0.7),
        (mk(2.0, 3.0, 0.1, 0.01), 0.5, 0.1, 0.2, 1.2 / 1.6, 6.0),
        (mk(1.0, 3.0, 0.2, 0.01), 0.7, 0.05, 0.2, 0.75, 2.0 + 2.0 / 0.7),
        (mk(1.0, 4.0, 0.05, 0.02), 0.5, 0.2, 0.4, 0.4 / 1.2, 4.0),
        (mk(0.5, 5.0, 0.2, 0.03), 0.9, 0.05, 0.25, 1.0 / 1.5, 2.0 + 2.0 / 2.7),
    ];
    let mut worst: f64 = 0.0;
    for (params, qbar, a, g, q0, tau) in cases {
        let got = [
            alpha_star(&params).unwrap(),
            gamma(&params).unwrap(),
            qbar0(&params).unwrap(),
            tau_discrepancy(qbar, params.s).unwrap(),
        ];
        for (x, y) in got.iter().zip([a, g, q0, tau]) {
            worst = worst.max((x - y).abs());
        }
    }
    outcome(worst <= 1e-12, format!("max deviation {worst:.1e} over 5 parameter sets (tol 1e-12)"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("duality-map inversion", Duration::from_secs(1), duality_inversion),
        ("adjoint exactness", Duration::from_secs(5), adjoint_exactness),
        ("gradient consistency", Duration::from_secs(10), gradient_consistency),
        ("Bregman identities", Duration::from_secs(1), bregman_identities),
        ("convex-oracle convergence", Duration::from_secs(5), convex_oracle),
        ("residual bound under source condition", Duration::from_secs(1), residual_bound),
        ("d-TIGRA table reproduction", Duration::from_secs(600), table1_reproduction),
        ("Landweber comparison", Duration::from_secs(900), landweber_ordering),
        ("constants calculator", Duration::from_secs(1), constants_calculator),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] {} {name}: {} ({:.2}s of {}s budget{})",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
