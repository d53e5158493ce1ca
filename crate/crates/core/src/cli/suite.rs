//! Identity drivers behind `verify` and the ten-criterion acceptance suite.

use crate::error::{Error, Result};
use crate::genus::TwistData;
use crate::greens::{current_equation_check, cusp_limit_check, GreenEvaluator};
use crate::heegner::square::{alpha_coefficient, charsum, lemmacoset_check, twisted_square_strata};
use crate::heegner::{strata_up_to, twisted_divisor};
use crate::lattice::{Cusp, Level, Mat2, UpperHalfPoint};
use crate::lifts::{
    hodge_pairing_coefficient, hodge_refinement_check, integrate_over_x0n, smallest_nonempty_stratum,
    verify_eisenstein_lift, verify_log_delta_lift, verify_unfolding, verify_vanishing_lift, QuadratureSpec,
    VerificationReport,
};
use crate::ntheory::arith::divisors;
use crate::ntheory::special::{beta_integral, bessel_k, dirichlet_l, erfc, exp_integral_e1, zeta};
use crate::ntheory::{hurwitz_class_number, real_quadratic_data, FundamentalDiscriminant};
use crate::series::{eisenstein_coefficients_at_1, kronecker_limit, kronecker_limit_closed_form, ThetaKernel};
use crate::weilrep::{MetaplecticElement, WeilRep};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;
use std::time::Instant;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn twist_json(t: &TwistData) -> serde_json::Value {
    json!({"N": t.n(), "delta": t.delta(), "r": t.twist_r})
}

/// A report for an exact identity: the sides are shown as floats, the
/// verdict is the exact comparison.
fn exact_report(identity: &str, parameters: serde_json::Value, lhs: Vec<f64>, rhs: Vec<f64>, holds: bool) -> VerificationReport {
    let rep = VerificationReport::compare(
        identity,
        parameters,
        lhs.into_iter().map(c).collect(),
        rhs.into_iter().map(c).collect(),
        0.0,
        json!({"arithmetic": "exact"}),
    );
    VerificationReport { passed: holds, ..rep }
}

/// Every nonempty twisted divisor with n ≤ nmax has degree 0.
pub fn verify_degree(twist: TwistData, nmax: Rational64) -> Result<VerificationReport> {
    let mut degrees = Vec::new();
    let mut checked = Vec::new();
    for (n, mu) in strata_up_to(twist.level, nmax) {
        let d = twisted_divisor(&twist, n, mu)?;
        if d.points.is_empty() {
            continue;
        }
        let deg = d.degree();
        checked.push(format!("({n}, {mu}): {} points, degree {deg}", d.points.len()));
        degrees.push(deg);
    }
    let holds = degrees.iter().all(|d| d.is_zero());
    let lhs = degrees.iter().map(|d| d.to_f64().unwrap_or(f64::NAN)).collect::<Vec<_>>();
    let rhs = vec![0.0; lhs.len()];
    let mut rep = exact_report("degree", json!({"twist": twist_json(&twist), "nmax": nmax.to_string()}), lhs, rhs, holds);
    rep.notes = checked;
    Ok(rep)
}

/// At level one the Eisenstein coefficients are H(4m) on μ = 0 and H(4m − 1) on μ = 1.
pub fn verify_hurwitz(max_index: i64) -> Result<VerificationReport> {
    let level = Level::new(1)?;
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    let mut holds = true;
    let mut notes = Vec::new();
    for m in 1..=max_index / 4 {
        for (n, mu, idx) in [(Rational64::from_integer(m), 0, 4 * m), (Rational64::new(4 * m - 1, 4), 1, 4 * m - 1)] {
            let got = eisenstein_coefficients_at_1(level, n, mu)?;
            let want = hurwitz_class_number(idx as u64);
            if got != want {
                holds = false;
                notes.push(format!("n = {n}, μ = {mu}: {got} vs H({idx}) = {want}"));
            }
            lhs.push(got.to_f64().unwrap_or(f64::NAN));
            rhs.push(want.to_f64().unwrap_or(f64::NAN));
        }
    }
    let mut rep = exact_report("hurwitz", json!({"N": 1, "max_index": max_index}), lhs, rhs, holds);
    rep.notes = notes;
    Ok(rep)
}

/// The orbit-count identity Σδ_w = |boundary classes| on every square
/// stratum of L_{rμ}[Δn] with −4Nn ≤ dmax, and the closed form √(−4NΔn)
/// where 2rμ ∉ L.
pub fn verify_lemmacoset(twist: TwistData, dmax: i64) -> Result<VerificationReport> {
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    let mut notes = Vec::new();
    let (mut identity_ok, mut closed_ok) = (true, true);
    let (mut strata, mut closed_checked) = (0, 0);
    for (n, mu) in twisted_square_strata(&twist, dmax) {
        let rep = lemmacoset_check(twist.level, twist.twisted_coset(mu), n * twist.delta())?;
        if rep.orbit_count == 0 {
            continue;
        }
        strata += 1;
        lhs.push(rep.delta_sum as f64);
        rhs.push(rep.boundary_count as f64);
        if !rep.identity_holds {
            identity_ok = false;
            notes.push(format!("orbit identity fails at n = {n}, μ = {mu}: {} vs {}", rep.delta_sum, rep.boundary_count));
        }
        if !rep.two_mu_in_lattice {
            closed_checked += 1;
            if !rep.closed_form_holds {
                closed_ok = false;
                notes.push(format!(
                    "closed form fails at n = {n}, μ = {mu} (coset {}): Σδ_w = {} but √D = {}",
                    rep.mu, rep.delta_sum, rep.sqrt_disc
                ));
            }
        }
    }
    notes.insert(
        0,
        format!("{strata} nonempty square strata; {closed_checked} with 2rμ ∉ L; orbit identity {identity_ok}; closed form {closed_ok}"),
    );
    let mut rep = exact_report(
        "lemmacoset",
        json!({"twist": twist_json(&twist), "dmax": dmax}),
        lhs,
        rhs,
        identity_ok && closed_ok,
    );
    rep.notes = notes;
    Ok(rep)
}

/// Σχ_Δ over the boundary classes, and the α-coefficient, vanish on every
/// square stratum with −4Nn ≤ dmax (Δ > 1).
pub fn verify_charsum(twist: TwistData, dmax: i64) -> Result<VerificationReport> {
    if twist.delta() == 1 {
        return Err(Error::InvalidParameter("the character sum needs Δ > 1".into()));
    }
    let (mut lhs, mut notes) = (Vec::new(), Vec::new());
    for (n, mu) in twisted_square_strata(&twist, dmax) {
        let s = charsum(&twist, n, mu)?;
        let a = alpha_coefficient(&twist, n, mu)?;
        if s != 0 || a != 0 {
            notes.push(format!("n = {n}, μ = {mu}: Σχ = {s}, α = {a}"));
        }
        lhs.push(s as f64);
        lhs.push(a as f64);
    }
    let holds = notes.is_empty();
    notes.insert(0, format!("{} strata", lhs.len() / 2));
    let rhs = vec![0.0; lhs.len()];
    let mut rep = exact_report("charsum", json!({"twist": twist_json(&twist), "dmax": dmax}), lhs, rhs, holds);
    rep.notes = notes;
    Ok(rep)
}

/// Finite-difference dd^c Ξ against ω at the given points.
pub fn verify_current(
    twist: TwistData,
    n: Rational64,
    mu: i64,
    v: f64,
    points: &[UpperHalfPoint],
    h: f64,
    budget: f64,
) -> Result<VerificationReport> {
    let g = GreenEvaluator::new(twist, n, mu, v, budget)?;
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for &z in points {
        let r = current_equation_check(&g, z, h)?;
        lhs.push(c(r.laplacian_side));
        rhs.push(c(r.form_side));
    }
    Ok(VerificationReport::compare(
        "current",
        json!({"twist": twist_json(&twist), "n": n.to_string(), "mu": mu, "v": v,
               "points": points.iter().map(|z| [z.x, z.y]).collect::<Vec<_>>()}),
        lhs,
        rhs,
        1e-3,
        json!({"h": h, "budget": budget}),
    ))
}

/// One representative per cusp of X₀(N), N squarefree.
pub fn cusps(level: i64) -> Vec<Cusp> {
    divisors(level as u64)
        .into_iter()
        .map(|q| if q as i64 == level { Cusp::INFINITY } else { Cusp::new(1, q as i64) })
        .collect()
}

/// Decay of Ξ to 0 at every cusp, heights 5 to 40.
pub fn verify_cusp(twist: TwistData, n: Rational64, mu: i64, v: f64, budget: f64, tolerance: f64) -> Result<VerificationReport> {
    let g = GreenEvaluator::new(twist, n, mu, v, budget)?;
    let (mut lhs, mut notes) = (Vec::new(), Vec::new());
    let mut passed = true;
    for cusp in cusps(twist.n()) {
        let r = cusp_limit_check(&g, cusp, tolerance)?;
        passed &= r.passed;
        notes.push(format!(
            "cusp {}/{}: max |Ξ| at y = 5, 10, 20, 40: {:.3e}, {:.3e}, {:.3e}, {:.3e}; monotone {}",
            cusp.p, cusp.q, r.max_abs[0], r.max_abs[1], r.max_abs[2], r.max_abs[3], r.monotone
        ));
        lhs.push(c(r.final_value));
    }
    let rhs = vec![c(0.0); lhs.len()];
    let mut rep = VerificationReport::compare(
        "cusp",
        json!({"twist": twist_json(&twist), "n": n.to_string(), "mu": mu, "v": v}),
        lhs,
        rhs,
        tolerance,
        json!({"budget": budget}),
    );
    rep.passed = passed;
    rep.notes = notes;
    Ok(rep)
}

/// Θ(τ, z) under S and T in τ and under Γ₀(N) in z.
pub fn verify_theta_modularity(twist: TwistData, tau: Complex64, z: UpperHalfPoint, budget: f64) -> Result<VerificationReport> {
    let k = ThetaKernel::new(twist, budget);
    let rep = WeilRep::new(twist.n());
    let eval = |t: Complex64, p: UpperHalfPoint| k.eval(t, p).map(|f| f.values);
    let base = eval(tau, z)?;
    let mut err: Option<Error> = None;
    let f = |t: Complex64| match eval(t, z) {
        Ok(v) => v,
        Err(_) => vec![c(f64::NAN); base.len()],
    };
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for g in [MetaplecticElement::s(), MetaplecticElement::t()] {
        lhs.extend(rep.slash_weight_threehalf(f, &g, tau));
        rhs.extend(base.iter().copied());
    }
    let nn = twist.n();
    for m in [Mat2::new(1, 0, nn, 1), Mat2::new(1, 1, 0, 1), Mat2::new(1, 1, nn, nn + 1), Mat2::new(2 * nn + 1, 1, 2 * nn, 1)] {
        debug_assert!(m.in_gamma0(nn) && m.det() == 1);
        match eval(tau, z.act(&m)) {
            Ok(v) => lhs.extend(v),
            Err(e) => err = Some(e),
        }
        rhs.extend(base.iter().copied());
    }
    if let Some(e) = err {
        return Err(e);
    }
    let mut out = VerificationReport::compare(
        "theta-modularity",
        json!({"twist": twist_json(&twist), "tau": [tau.re, tau.im], "z": [z.x, z.y]}),
        lhs,
        rhs,
        1e-5,
        json!({"budget": budget}),
    );
    // absolute error against the kernel size decides here
    let scale = base.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    out.rel_err = out.abs_err / scale;
    out.passed = out.rel_err <= 1e-5;
    Ok(out)
}

/// Kronecker limit against −(1/12) log(y^{6φ(N)} |Δ_N(z)|) at seeded random z.
pub fn verify_kronecker(level: i64, samples: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed ^ level as u64);
    let (mut lhs, mut rhs, mut pts) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..samples {
        let z = UpperHalfPoint { x: rng.gen_range(-0.5..0.5), y: rng.gen_range(0.6..2.5) };
        lhs.push(c(kronecker_limit(level, z, 1e-3)?));
        rhs.push(c(kronecker_limit_closed_form(level, z)));
        pts.push([z.x, z.y]);
    }
    Ok(VerificationReport::compare(
        "kronecker",
        json!({"N": level, "points": pts, "seed": seed}),
        lhs,
        rhs,
        1e-4,
        json!({"h": 1e-3, "extrapolation": "Richardson on symmetric differences"}),
    ))
}

/// Volumes, special-function oracles and the class number formula.
pub fn verify_substrate(spec: &QuadratureSpec) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let (v1, v6) = (integrate_over_x0n(|_| 1.0, 1, spec)?, integrate_over_x0n(|_| 1.0, 6, spec)?);
    out.push(VerificationReport::compare(
        "volume",
        json!({"N": [1, 6]}),
        vec![c(v1.value), c(v6.value)],
        vec![c(PI / 3.0), c(4.0 * PI)],
        1e-6,
        json!({"quadrature": spec}),
    ));
    // closed forms and tabulated constants
    let e1_1 = 0.219_383_934_395_520_27;
    let k0_1 = 0.421_024_438_240_708_33;
    let k1_2 = 0.139_865_881_816_522_43;
    let zeta3 = 1.202_056_903_159_594_2;
    let lhs = vec![
        beta_integral(1.0, 1.0)?,
        exp_integral_e1(1.0),
        beta_integral(1.5, 1.0)?,
        bessel_k(0.0, 1.0)?,
        bessel_k(1.0, 2.0)?,
        bessel_k(0.5, 3.0)?,
        bessel_k(2.5, 0.7)?,
        zeta(2.0)?,
        zeta(3.0)?,
        zeta(4.0)?,
    ];
    let k52 = |x: f64| (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 3.0 / x + 3.0 / (x * x));
    let rhs = vec![
        e1_1,
        e1_1,
        2.0 * (-1.0f64).exp() - 2.0 * PI.sqrt() * erfc(1.0),
        k0_1,
        k1_2,
        (PI / 6.0).sqrt() * (-3.0f64).exp(),
        k52(0.7),
        PI * PI / 6.0,
        zeta3,
        PI.powi(4) / 90.0,
    ];
    out.push(VerificationReport::compare(
        "special-functions",
        json!({"values": ["beta_1(1)", "E1(1)", "beta_3/2(1)", "K_0(1)", "K_1(2)", "K_1/2(3)", "K_5/2(0.7)", "zeta(2)", "zeta(3)", "zeta(4)"]}),
        lhs.into_iter().map(c).collect(),
        rhs.into_iter().map(c).collect(),
        1e-10,
        json!({}),
    ));
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    let deltas = [5, 8, 12, 13, 73];
    for d in deltas {
        let data = real_quadratic_data(FundamentalDiscriminant::new(d)?)?;
        lhs.push(c((d as f64).sqrt() * dirichlet_l(d, 1.0)?));
        rhs.push(c(2.0 * data.class_number as f64 * data.fundamental_unit_log));
    }
    out.push(VerificationReport::compare(
        "class-number-formula",
        json!({"delta": deltas}),
        lhs,
        rhs,
        1e-6,
        json!({}),
    ));
    Ok(out)
}

/// Result of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub number: u8,
    pub title: String,
    pub passed: bool,
    pub seconds: f64,
    pub time_limit: f64,
    pub summary: String,
    pub reports: Vec<VerificationReport>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({:.1} s of {:.0} s): {}",
            self.number,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds,
            self.time_limit,
            self.summary
        )
    }
}

pub const CRITERIA: usize = 10;

fn tw(n: i64, d: i64, r: i64) -> TwistData {
    TwistData::new(n, d, r).expect("suite twists are valid")
}

fn q(p: i64, d: i64) -> Rational64 {
    Rational64::new(p, d)
}

fn pt(x: f64, y: f64) -> UpperHalfPoint {
    UpperHalfPoint { x, y }
}

/// The first r in [0, 2N) with r² ≡ Δ (mod 4N).
pub fn default_twist_r(level: i64, delta: i64) -> Option<i64> {
    (0..2 * level).find(|r| (r * r - delta).rem_euclid(4 * level) == 0)
}

fn worst(reports: &[VerificationReport]) -> String {
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passed).collect();
    let max_rel = reports.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    if failed.is_empty() {
        format!("{} checks, max rel err {max_rel:.2e}", reports.len())
    } else {
        let names: Vec<String> = failed.iter().map(|r| format!("{} {}", r.identity, r.parameters)).collect();
        format!("{} of {} checks fail: {}", failed.len(), reports.len(), names.join("; "))
    }
}

fn run(number: u8, title: &str, time_limit: f64, body: impl FnOnce() -> Result<(Vec<VerificationReport>, String)>) -> CriterionOutcome {
    let start = Instant::now();
    let result = body();
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok((reports, extra)) => {
            let within = seconds <= time_limit;
            let mut summary = worst(&reports);
            if !extra.is_empty() {
                summary = format!("{summary}; {extra}");
            }
            if !within {
                summary = format!("{summary}; over the time limit");
            }
            CriterionOutcome {
                number,
                title: title.to_string(),
                passed: within && reports.iter().all(|r| r.passed),
                seconds,
                time_limit,
                summary,
                reports,
            }
        }
        Err(e) => CriterionOutcome {
            number,
            title: title.to_string(),
            passed: false,
            seconds,
            time_limit,
            summary: format!("error: {e}"),
            reports: Vec::new(),
        },
    }
}

/// Runs acceptance criterion `number` (1 to 10).
pub fn run_criterion(number: u8, spec: &QuadratureSpec, seed: u64) -> CriterionOutcome {
    match number {
        1 => run(1, "degree zero", 10.0, || {
            let reps = [tw(1, 5, 1), tw(6, 73, 1), tw(6, 12, 6)]
                .into_iter()
                .map(|t| verify_degree(t, Rational64::from_integer(5)))
                .collect::<Result<Vec<_>>>()?;
            Ok((reps, String::new()))
        }),
        2 => run(2, "Hurwitz class numbers at level one", 30.0, || Ok((vec![verify_hurwitz(100)?], String::new()))),
        3 => run(3, "square-stratum character sums", 10.0, || {
            let mut reps = Vec::new();
            let mut skipped = Vec::new();
            for level in [1, 6] {
                for delta in [1, 5, 73, 12] {
                    let Some(r) = default_twist_r(level, delta) else {
                        skipped.push(format!("(N, Δ) = ({level}, {delta}) has no r"));
                        continue;
                    };
                    let t = tw(level, delta, r);
                    reps.push(verify_lemmacoset(t, 400)?);
                    if delta > 1 {
                        reps.push(verify_charsum(t, 400)?);
                    }
                }
            }
            let closed: Vec<String> = reps
                .iter()
                .filter(|r| r.identity == "lemmacoset" && !r.passed)
                .filter_map(|r| r.notes.get(1).cloned())
                .collect();
            let mut extra = skipped.join("; ");
            if !closed.is_empty() {
                extra = format!("{extra}; first counterexample: {}", closed[0]);
            }
            Ok((reps, extra))
        }),
        4 => run(4, "Green function current equation and cusp decay", 120.0, || {
            let budget = 1e-14;
            let mut reps = vec![
                verify_current(tw(1, 5, 1), q(1, 1), 0, 1.0, &[pt(0.0, 2.0), pt(0.31, 1.4)], 1e-3, budget)?,
                verify_current(tw(1, 5, 1), q(-1, 1), 0, 1.0, &[pt(0.1, 0.9)], 1e-3, budget)?,
                verify_current(tw(6, 73, 1), q(23, 24), 1, 1.0, &[pt(0.137, 0.41)], 1e-3, budget)?,
                verify_current(tw(6, 73, 1), q(-1, 24), 1, 1.0, &[pt(0.21, 0.33)], 1e-3, budget)?,
            ];
            for t in [tw(1, 5, 1), tw(6, 73, 1)] {
                let nn = t.n();
                let nonsquare = strata_up_to(t.level, Rational64::from_integer(1))
                    .into_iter()
                    .map(|(n, mu)| (-n, mu))
                    .find(|&(n, _)| {
                        let d = -n * Rational64::from_integer(4 * nn * t.delta());
                        d.is_integer() && crate::ntheory::arith::exact_sqrt(d.to_integer()).is_none()
                    })
                    .expect("a non-square stratum exists");
                let square = *twisted_square_strata(&t, 400).first().expect("a square stratum exists");
                for (n, mu) in [nonsquare, square, (Rational64::zero(), 0)] {
                    reps.push(verify_cusp(t, n, mu, 1.0, 1e-12, 1e-4)?);
                }
            }
            Ok((reps, String::new()))
        }),
        5 => run(5, "theta kernel modularity", 120.0, || {
            let reps = [tw(1, 5, 1), tw(6, 73, 1), tw(6, 12, 6)]
                .into_iter()
                .map(|t| verify_theta_modularity(t, Complex64::new(0.0, 1.0), pt(0.0, 2.0), 1e-12))
                .collect::<Result<Vec<_>>>()?;
            Ok((reps, String::new()))
        }),
        6 => run(6, "Eisenstein lift and unfolding", 600.0, || {
            let t = tw(1, 5, 1);
            let mut reps = Vec::new();
            for tau in [Complex64::new(0.0, 1.0), Complex64::new(0.25, 1.0)] {
                reps.push(verify_eisenstein_lift(t, tau, 2.5, spec, 320)?);
                reps.push(verify_unfolding(t, tau, 2.5, spec, 320)?);
            }
            Ok((reps, String::new()))
        }),
        7 => run(7, "vanishing lift of 1", 300.0, || {
            let reps = [tw(1, 5, 1), tw(6, 73, 1)]
                .into_iter()
                .map(|t| verify_vanishing_lift(t, Complex64::new(0.0, 1.0), spec))
                .collect::<Result<Vec<_>>>()?;
            Ok((reps, String::new()))
        }),
        8 => run(8, "Kronecker limit formula", 120.0, || {
            Ok((vec![verify_kronecker(1, 5, seed)?, verify_kronecker(6, 5, seed)?], String::new()))
        }),
        9 => run(9, "main identity per coefficient", 900.0, || {
            let t = tw(1, 5, 1);
            let mut reps = Vec::new();
            let mut constants = Vec::new();
            for (n, mu) in [(q(1, 1), 0), (q(3, 4), 1)] {
                let r = verify_log_delta_lift(t, n, mu, 1.0, spec)?;
                constants.extend(r.notes.iter().filter(|s| s.starts_with("fitted")).cloned());
                reps.push(r);
                reps.push(hodge_pairing_coefficient(t, n, mu, 1.0, spec)?);
            }
            let t6 = tw(6, 73, 1);
            if let Some((n, mu)) = smallest_nonempty_stratum(t6, Rational64::from_integer(5))? {
                reps.push(hodge_refinement_check(t6, n, mu, 1.0, spec, 1e-3)?);
            }
            Ok((reps, constants.first().cloned().unwrap_or_default()))
        }),
        10 => run(10, "numerical substrate", 60.0, || Ok((verify_substrate(spec)?, String::new()))),
        _ => CriterionOutcome {
            number,
            title: "unknown".into(),
            passed: false,
            seconds: 0.0,
            time_limit: 0.0,
            summary: format!("there is no criterion {number}"),
            reports: Vec::new(),
        },
    }
}

/// All criteria in order, calling `each` as each one finishes.
pub fn acceptance_suite(spec: &QuadratureSpec, seed: u64, mut each: impl FnMut(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    (1..=CRITERIA as u8)
        .map(|k| {
            let o = run_criterion(k, spec, seed);
            each(&o);
            o
        })
        .collect()
}
