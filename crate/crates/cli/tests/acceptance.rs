//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use flatspace_cli::scenario::{C_SI, G_SI};
use flatspace_cli::{run, Preset, RunReport, Scenario};
use flatspace_core::carrier::{density_identities, enclosed_energy, ElectricCarrier, RadialCarrier};
use flatspace_core::metric::{build_metric, gauge_shift, proper_time_rate, GaugeFn, UniformPotential};
use flatspace_core::Vec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn value(r: &RunReport, model: &str, quantity: &str) -> Result<f64, String> {
    r.find(model, quantity)
        .map(|row| row.value)
        .ok_or_else(|| format!("report lacks {model}/{quantity}"))
}

fn run_preset(command: &str, s: &Scenario) -> Result<(RunReport, Duration), String> {
    let start = Instant::now();
    let r = run(command, s).map_err(|e| e.to_string())?;
    Ok((r, start.elapsed()))
}

fn binary(args: &[&str]) -> Result<(RunReport, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_flatspace"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let r = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok((r, elapsed))
}

const WEBER: &str = "flatspace-weber";

fn echo_delay() -> Outcome {
    let (r, t) = binary(&["echo-delay", "--preset", "solar"])?;
    let us = value(&r, WEBER, "delay_quadrature_us")?;
    let closed = value(&r, WEBER, "delay_closed_form_us")?;
    check(
        rel(us, 220.0) <= 0.02 && rel(us, closed) <= 0.02 && t < Duration::from_secs(1),
        format!("delay {us:.2} us, closed form {closed:.2} us, {:.0} ms", t.as_secs_f64() * 1e3),
    )
}

fn deflection() -> Outcome {
    let (r, t) = run_preset("light-deflect", &Preset::Solar.scenario())?;
    let routes = [
        value(&r, WEBER, "deflection_integral_arcsec")?,
        value(&r, WEBER, "deflection_ray_arcsec")?,
        value(&r, WEBER, "deflection_closed_form_arcsec")?,
    ];
    let each = routes.iter().all(|v| rel(-v, 1.75) <= 0.01);
    let pairwise = (0..3).all(|i| (0..3).all(|j| rel(routes[i], routes[j]) <= 0.01));
    check(
        each && pairwise && t < Duration::from_secs(1),
        format!(
            "integral {:.4}\", ray {:.4}\", closed {:.4}\", {:.0} ms",
            routes[0],
            routes[1],
            routes[2],
            t.as_secs_f64() * 1e3
        ),
    )
}

fn precession() -> Outcome {
    let s = Scenario { n_orbits: 10, ..Preset::Mercury.scenario() };
    let (r, t) = run_preset("precession", &s)?;
    let numeric = value(&r, WEBER, "precession_numeric")?;
    let analytic = value(&r, WEBER, "precession_analytic")?;
    let century = value(&r, WEBER, "precession_numeric_century")?;
    let exact = value(&r, WEBER, "precession_exact_metric_geodesic")?;
    // independent oracle for the analytic target
    let oracle = 6.0 * PI * s.r_o / (s.semi_major_axis * (1.0 - s.eccentricity * s.eccentricity));
    check(
        rel(numeric, oracle) <= 5e-3
            && rel(analytic, oracle) < 1e-12
            && (century - 42.9).abs() <= 0.5
            && t < Duration::from_secs(10),
        format!(
            "numeric {numeric:.6e} vs {oracle:.6e} rad/orbit, {century:.2}\"/century, {:.0} ms \
             (exact warped-time geodesic alone: {exact:.4e})",
            t.as_secs_f64() * 1e3
        ),
    )
}

fn normalization() -> Outcome {
    let c = RadialCarrier::new(1480.0, G_SI / C_SI.powi(4)).map_err(|e| e.to_string())?;
    let total = enclosed_energy(&c, f64::INFINITY).map_err(|e| e.to_string())?;
    let half = enclosed_energy(&c, c.r_o).map_err(|e| e.to_string())?;
    let oracle = c.r_o / c.coupling;
    let e_total = rel(total.quadrature, oracle);
    let e_half = (half.analytic / oracle - 0.5).abs();
    let q_half = rel(half.quadrature, 0.5 * oracle);
    check(
        e_total <= 1e-8 && e_half <= 1e-12 && q_half <= 1e-10,
        format!("total rel err {e_total:.1e}, half-radius err {e_half:.1e} (quadrature {q_half:.1e})"),
    )
}

fn density_equality() -> Outcome {
    let c = RadialCarrier::new(1480.0, G_SI / C_SI.powi(4)).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let r = c.r_o * 10f64.powf(-6.0 + 12.0 * k as f64 / 999.0);
        let d = density_identities(&c, r, 1e-3 * r).map_err(|e| e.to_string())?;
        worst = worst.max(d.equality_residual / d.epsilon);
    }
    let mut ratios = Vec::new();
    for x in [0.1, 1.0, 10.0, 100.0] {
        let r = x * c.r_o;
        let h = 1e-2 * r;
        let coarse = density_identities(&c, r, h).map_err(|e| e.to_string())?;
        let fine = density_identities(&c, r, h / 2.0).map_err(|e| e.to_string())?;
        let exact = coarse.divergence_analytic;
        ratios.push((coarse.divergence_fd - exact).abs() / (fine.divergence_fd - exact).abs());
    }
    let second_order = ratios.iter().all(|q| (q - 4.0).abs() < 0.2);
    check(
        worst < 1e-12 && second_order,
        format!("max |eps_a - eps_p|/eps {worst:.1e}, halving ratios {ratios:.3?}"),
    )
}

fn flatness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut flat, mut inv): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let g0 = rng.gen_range(-0.9..0.9);
        let gi = Vec3::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let k = Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (a, w) = (rng.gen_range(-0.05..0.05), rng.gen_range(-1.0..1.0));
        let phi: GaugeFn = Arc::new(move |t: f64, x: &Vec3| a * (k.dot(x) - w * t).sin() + 0.01 * a * t * t);
        let pot = gauge_shift(UniformPotential::new(g0, gi), phi, 1e-4);
        let at = Vec3::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let m = build_metric(&pot, &at).map_err(|e| e.to_string())?;
        flat = flat.max(m.flatness_residual());
        inv = inv.max(m.inverse_residual());
    }
    check(flat < 1e-12 && inv < 1e-12, format!("max|gamma - I| {flat:.1e}, max|g ginv - I| {inv:.1e}"))
}

fn spin_transport() -> Outcome {
    let s = Preset::Earth.scenario();
    let (r, t) = run_preset("gyro", &s)?;
    let mismatch = value(&r, WEBER, "rotation_relative_mismatch")?;
    let eq = value(&r, WEBER, "omega_fd_equatorial_over_gi_omega_r3")?;
    let pole = value(&r, WEBER, "omega_fd_polar_over_gi_omega_r3")?;
    let geodetic = value(&r, WEBER, "rotation_geodetic_rate")?;
    let dragging = value(&r, WEBER, "rotation_frame_dragging_rate")?;
    check(
        mismatch <= 0.01 && (eq + 1.0).abs() < 1e-12 && (pole - 2.0).abs() < 1e-12,
        format!(
            "numeric vs integrated rates {mismatch:.1e}, Omega_fd equator {eq:.15}, pole {pole:.15}, \
             geodetic {geodetic:.1} mas/yr, frame dragging {dragging:.2} mas/yr, {:.0} ms",
            t.as_secs_f64() * 1e3
        ),
    )
}

fn time_rate() -> Outcome {
    let (mut worst, mut most) = (0.0f64, 0usize);
    for k in 1..=500 {
        let x = 0.5 * k as f64 / 500.0;
        // static observer and circular orbit at r_o/r = x
        let cases = [(0.0, 1.0 / (1.0 + x)), (x.sqrt() / (1.0 + x).powf(1.5), 1.0 / (1.0 + x).sqrt())];
        for (ldot, energy) in cases {
            let p = proper_time_rate(ldot, x, energy).map_err(|e| format!("x = {x}: {e}"))?;
            worst = worst.max((p.rate - 1.0 / (1.0 + x)).abs());
            most = most.max(p.iterations);
        }
    }
    check(worst < 1e-12 && most <= 50, format!("max error {worst:.1e}, max iterations {most}"))
}

fn electric() -> Outcome {
    let c = ElectricCarrier::new(-1.0, 7e-58, 7e-58).map_err(|e| e.to_string())?;
    let q = c.total_charge().map_err(|e| e.to_string())?;
    let half = c.charge_inside(c.r_o) / c.e;
    let se = c.self_energy().map_err(|e| e.to_string())?;
    let oracle = c.e * c.e / c.r_e;
    let se_err = [se.constant_potential, se.potential_overlap, se.field_energy]
        .iter()
        .map(|v| rel(*v, oracle))
        .fold(0.0, f64::max);
    let (r, _) = binary(&["electric", "--preset", "electron"])?;
    let cli_q = value(&r, WEBER, "total_charge")?;
    check(
        rel(q, c.e) <= 1e-8 && (half - 0.5).abs() <= 1e-8 && se_err <= 1e-8 && rel(cli_q, -1.0) <= 1e-8,
        format!("charge err {:.1e}, inner fraction {half}, self-energy err {se_err:.1e}", rel(q, c.e)),
    )
}

fn baseline() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for preset in [Preset::Solar, Preset::Mercury] {
        let (r, _) = run_preset("compare", &preset.scenario())?;
        for q in ["precession", "deflection", "delay"] {
            let d = value(&r, "flatspace-weber vs schwarzschild", &format!("{q}_relative_difference"))?;
            ok &= d < 1e-3;
            details.push(format!("{} {q} {d:.1e}", preset.name()));
        }
    }
    let (r, _) = run_preset("compare", &Preset::StrongField.scenario())?;
    let strong = value(&r, "flatspace-weber vs schwarzschild", "precession_relative_difference")?;
    let a = value(&r, WEBER, "precession")?;
    let b = value(&r, "schwarzschild", "precession")?;
    ok &= strong > 0.01;
    details.push(format!("r_min = 20 r_o: {a:.4} vs {b:.4} rad/orbit ({:.0}% apart)", strong * 100.0));
    check(ok, details.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("radar echo delay", echo_delay),
        ("light deflection", deflection),
        ("perihelion precession", precession),
        ("energy normalization", normalization),
        ("density equality", density_equality),
        ("spatial flatness", flatness),
        ("spin transport", spin_transport),
        ("fixed-point time rate", time_rate),
        ("electric analog", electric),
        ("baseline comparison", baseline),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
