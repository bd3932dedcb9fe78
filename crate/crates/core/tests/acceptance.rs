//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use newton_planes::dynamics::EscapeConfig;
use newton_planes::operators::{
    closed_form_criticals, instantiate, FamilyId, FamilyKind, NewtonLikeOperator,
};
use newton_planes::poly::{
    match_root_sets, reduce_palindromic, roots, solve_cubic, solve_poly_oracle, Polynomial,
};
use newton_planes::render::{
    render_parameter_plane, render_stability_map, Palette, StabilityClass, SweepOptions, Window,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn within(limit: Duration, start: Instant) -> Result<f64, String> {
    let t = start.elapsed();
    check(t < limit, format!("took {:.2?}, limit {:.0?}", t, limit))?;
    Ok(t.as_secs_f64())
}

/// Uniform parameter in the family's published window with a usable operator.
fn random_family(rng: &mut StdRng, kind: FamilyKind) -> (Complex64, NewtonLikeOperator) {
    let [x0, x1, y0, y1] = kind.default_parameter_window();
    loop {
        let a = c(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
        if let Ok(op) = instantiate(FamilyId::new(kind, a)) {
            return (a, op);
        }
    }
}

fn random_complex(rng: &mut StdRng, r: f64) -> Complex64 {
    c(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// `|den(z)|` is not small compared with the size of its terms.
fn off_pole(op: &NewtonLikeOperator, z: Complex64) -> bool {
    let d = op.denominator();
    let scale: f64 = d
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, x)| x.norm() * z.norm().powi(i as i32))
        .sum();
    d.eval(z).norm() > 1e-3 * scale
}

fn ac1_symmetry_law() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for kind in FamilyKind::ALL {
        let mut n = 0;
        while n < 1000 {
            let (_, op) = random_family(&mut rng, kind);
            let r = 10f64.powf(rng.gen_range(-1.0..1.0));
            let z = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
            if !off_pole(&op, z) || !off_pole(&op, z.inv()) {
                continue;
            }
            let defect = (op.eval_direct(z) * op.eval_direct(z.inv()) - 1.0).norm();
            check(
                defect < 1e-9,
                format!("{kind}: |O(z)O(1/z) - 1| = {defect:e} at z = {z}"),
            )?;
            worst = worst.max(defect);
            n += 1;
        }
    }
    let t = within(Duration::from_secs(1), start)?;
    Ok(format!("4000 samples, worst defect {worst:.1e}, {t:.2} s"))
}

fn ac2_palindromic_derivative() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let den: Vec<Complex64> = (0..=k).map(|_| random_complex(&mut rng, 5.0)).collect();
        let Ok(op) = NewtonLikeOperator::new(n, Polynomial::new(den)) else {
            continue;
        };
        let b = op.derivative_numerator();
        check(
            b.is_palindromic(1e-10),
            format!("random operator n={n} k={k}: {b:?}"),
        )?;
    }
    for kind in FamilyKind::ALL {
        for _ in 0..200 {
            let (a, op) = random_family(&mut rng, kind);
            check(
                op.derivative_numerator().is_palindromic(1e-10),
                format!("{kind} at a = {a}"),
            )?;
        }
    }
    let t = within(Duration::from_secs(5), start)?;
    Ok(format!(
        "1000 random operators and 800 family members, {t:.2} s"
    ))
}

fn ac3_critical_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for kind in FamilyKind::ALL {
        for _ in 0..200 {
            let (a, op) = random_family(&mut rng, kind);
            let closed = closed_form_criticals(FamilyId::new(kind, a))
                .map_err(|e| format!("{kind} a={a}: {e}"))?;
            let mut b = op.derivative_numerator();
            for f in kind.known_factors(a) {
                b = b.div_rem(&f).map_err(|e| e.to_string())?.0;
            }
            let oracle = solve_poly_oracle(&b).map_err(|e| format!("{kind} a={a}: {e}"))?;
            let d = match_root_sets(&closed.full, &oracle);
            check(d < 1e-8, format!("{kind} a = {a}: distance {d:e}"))?;
            worst = worst.max(d);
        }
    }
    let t = within(Duration::from_secs(30), start)?;
    Ok(format!(
        "800 parameters, worst distance {worst:.1e}, {t:.2} s"
    ))
}

fn kim_multiplier(a: Complex64) -> Result<Complex64, String> {
    let op = instantiate(FamilyId::new(FamilyKind::Kim4, a)).map_err(|e| e.to_string())?;
    op.multiplier(c(1.0, 0.0)).map_err(|e| e.to_string())
}

fn ac4_kim_circle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (a, _) = random_family(&mut rng, FamilyKind::Kim4);
        let lambda = kim_multiplier(a)?;
        // the multiplier of z = 1 is -64/(a - 16); its modulus is 64/|a - 16|
        let expected = -64.0 / (a - 16.0);
        let rel = (lambda - expected).norm() / expected.norm();
        check(
            rel < 1e-10,
            format!("a = {a}: lambda = {lambda}, expected {expected}"),
        )?;
        worst = worst.max(rel);
    }
    let mut worst_circle: f64 = 0.0;
    for k in 0..64 {
        let a = c(16.0, 0.0) + Complex64::from_polar(64.0, k as f64 * std::f64::consts::TAU / 64.0);
        if (a - 1.0).norm() < 1e-9 {
            continue;
        }
        let m = kim_multiplier(a)?.norm();
        check(
            (m - 1.0).abs() < 1e-9,
            format!("|lambda| = {m} on the circle at a = {a}"),
        )?;
        worst_circle = worst_circle.max((m - 1.0).abs());
    }
    let (inside, outside) = (
        kim_multiplier(c(84.0, 0.0))?.norm(),
        kim_multiplier(c(-2.0, 0.0))?.norm(),
    );
    check(inside < 1.0, format!("|lambda(84)| = {inside}"))?;
    check(outside > 1.0, format!("|lambda(-2)| = {outside}"))?;
    Ok(format!(
        "lambda(1) = -64/(a-16) to {worst:.1e} rel; circle defect {worst_circle:.1e}; |lambda| = {inside:.4} at 84, {outside:.4} at -2"
    ))
}

fn ac5_ermakov_parabolic() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let minus_one = c(-1.0, 0.0);
    let (mut w0, mut w1): (f64, f64) = (0.0, 0.0);
    for _ in 0..500 {
        let (a, op) = random_family(&mut rng, FamilyKind::ErmakovKalitkin);
        let image = (op.eval(minus_one) + 1.0).norm();
        let slope = (op.derivative(minus_one) - 1.0).norm();
        check(image < 1e-12, format!("a = {a}: |O(-1) + 1| = {image:e}"))?;
        check(slope < 1e-10, format!("a = {a}: |O'(-1) - 1| = {slope:e}"))?;
        w0 = w0.max(image);
        w1 = w1.max(slope);
        let fixed = op.fixed_points().map_err(|e| format!("a = {a}: {e}"))?;
        let strange: Vec<Complex64> = fixed
            .iter()
            .filter(|f| f.is_strange())
            .map(|f| f.location)
            .collect();
        let near = |p: Complex64| strange.iter().any(|z| (z - p).norm() < 1e-4);
        check(
            near(c(1.0, 0.0))
                && near(minus_one)
                && strange
                    .iter()
                    .all(|z| (z - 1.0).norm() < 1e-4 || (z + 1.0).norm() < 1e-4),
            format!("a = {a}: strange fixed points {strange:?}"),
        )?;
    }
    Ok(format!(
        "500 parameters; worst |O(-1)+1| = {w0:.1e}, |O'(-1)-1| = {w1:.1e}; strange set {{1, -1}}"
    ))
}

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_newton-planes")
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(binary())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Single-pixel CLI render centered at `a`; returns the CSV data row.
fn cli_pixel(dir: &Path, mode: &str, family: &str, a: Complex64) -> Result<Vec<String>, String> {
    let h = 1e-9;
    let window = format!("{},{},{},{}", a.re - h, a.re + h, a.im - h, a.im + h);
    let (img, grid) = (dir.join("p.ppm"), dir.join("p.csv"));
    cli(&[
        "--mode",
        mode,
        "--family",
        family,
        "--window",
        &window,
        "--res",
        "1x1",
        "--max-iter",
        "2000",
        "--esc",
        "1e4",
        "--out",
        img.to_str().unwrap(),
        "--grid-out",
        grid.to_str().unwrap(),
    ])?;
    let text = std::fs::read_to_string(&grid).map_err(|e| e.to_string())?;
    let row = text.lines().nth(1).ok_or("grid has no data row")?;
    Ok(row.split(',').map(String::from).collect())
}

fn ac6_pixel_classifications() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases: [(&str, Complex64, usize, usize); 11] = [
        ("kim", c(-30.0, 0.0), 0, 2),
        ("kim", c(-30.0, 8.0), 1, 2),
        ("kim", c(-2.0, 0.0), 2, 2),
        ("kim", c(84.0, 0.0), 0, 2),
        ("sixth", c(3.9, 0.0), 0, 3),
        ("sixth", c(3.9, 0.04), 1, 3),
        ("sixth", c(4.1, 0.2), 2, 3),
        ("sixth", c(4.4, 0.4), 3, 3),
        ("cheby", c(0.0, 2.0), 2, 2),
        ("ermakov", c(-7.0, 0.0), 1, 2),
        ("ermakov", c(9.0, 0.0), 0, 2),
    ];
    for (family, a, conv, free) in cases {
        let row = cli_pixel(dir.path(), "param", family, a)?;
        let got = (
            row[3].parse::<usize>().unwrap_or(usize::MAX),
            row[2].parse::<usize>().unwrap_or(0),
        );
        check(
            got == (conv, free),
            format!(
                "{family} a = {a}: {} of {}, expected {conv} of {free}",
                got.0, got.1
            ),
        )?;
    }
    let img = dir.path().join("d.ppm");
    let text = cli(&[
        "--mode",
        "dyn",
        "--family",
        "kim",
        "--param",
        "84,0",
        "--res",
        "1x1",
        "--max-iter",
        "2000",
        "--out",
        img.to_str().unwrap(),
    ])?;
    let to_one = text
        .lines()
        .filter(|l| l.starts_with("critical") && l.contains("target 1+0i"))
        .count();
    check(
        to_one == 2,
        format!("kim a = 84: {to_one} of 2 critical orbits reach z = 1\n{text}"),
    )?;
    let t = within(Duration::from_secs(10), start)?;
    Ok(format!("12 CLI runs agree, {t:.2} s"))
}

fn ac7_capture_disjoint() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (a, want) in [(1.7, "disjoint"), (1.45, "capture")] {
        let row = cli_pixel(dir.path(), "capture", "cheby", c(a, 0.0))?;
        check(
            row[3] == "0" && row[5] == want,
            format!("a = {a}: row {row:?}, expected {want}"),
        )?;
    }
    let t = within(Duration::from_secs(2), start)?;
    Ok(format!("a = 1.7 disjoint, a = 1.45 capture, {t:.2} s"))
}

fn strange_points(kind: FamilyKind, a: Complex64) -> Result<Vec<Complex64>, String> {
    let op = instantiate(FamilyId::new(kind, a)).map_err(|e| e.to_string())?;
    let fixed = op.fixed_points().map_err(|e| e.to_string())?;
    Ok(fixed
        .iter()
        .filter(|f| f.is_strange())
        .flat_map(|f| std::iter::repeat_n(f.location, f.multiplicity))
        .collect())
}

fn ac8_strange_fixed_points() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..50 {
        let (a, _) = random_family(&mut rng, FamilyKind::Kim4);
        let s = strange_points(FamilyKind::Kim4, a)?;
        check(
            s.len() == 7,
            format!("kim a = {a}: {} strange fixed points", s.len()),
        )?;
        let others: Vec<Complex64> = s
            .iter()
            .copied()
            .filter(|z| (z - 1.0).norm() > 1e-6)
            .collect();
        check(others.len() == 6, format!("kim a = {a}: {others:?}"))?;
        let inverses: Vec<Complex64> = others.iter().map(|z| z.inv()).collect();
        let d = match_root_sets(&others, &inverses);
        check(
            d < 1e-8,
            format!("kim a = {a}: not closed under inversion ({d:e})"),
        )?;

        let (a, _) = random_family(&mut rng, FamilyKind::ChebyshevMultipoint);
        let s = strange_points(FamilyKind::ChebyshevMultipoint, a)?;
        let others: Vec<Complex64> = s
            .iter()
            .copied()
            .filter(|z| (z - 1.0).norm() > 1e-6)
            .collect();
        check(
            s.len() == 5 && others.len() == 4,
            format!("cheby a = {a}: {s:?}"),
        )?;
        let z = &others;
        let pairings = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)];
        let ok = pairings.iter().any(|&(i, j, k, l)| {
            (z[i] * z[j] - 1.0).norm() < 1e-8 && (z[k] * z[l] - 1.0).norm() < 1e-8
        });
        check(
            ok,
            format!("cheby a = {a}: no pairing with products 1 in {z:?}"),
        )?;
    }
    Ok("kim: 7 strange points, 3 inverse pairs; cheby: 1 plus 2 inverse pairs (50 parameters each)".into())
}

fn ac9_sixth_reduction() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, _) = random_family(&mut rng, FamilyKind::SixthOrder);
        let q = reduce_palindromic(&FamilyKind::SixthOrder.critical_polynomial(a))
            .map_err(|e| e.to_string())?;
        let ours = roots(&q).map_err(|e| e.to_string())?;
        let [c0, c1, c2, c3] = FamilyKind::sixth_order_reduced_cubic(a);
        let printed = solve_cubic(c3, c2, c1, c0).map_err(|e| e.to_string())?;
        let d = match_root_sets(&ours, &printed);
        check(d < 1e-8, format!("a = {a}: distance {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("100 parameters, worst distance {worst:.1e}"))
}

fn ac10_determinism() -> Outcome {
    let window = Window::new([-55.0, 85.0, -70.0, 70.0], 1000, 1000).map_err(|e| e.to_string())?;
    let cfg = EscapeConfig::new(1e4, 500);
    let palette = Palette::default();
    let many = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .max(4);
    let mut results = Vec::new();
    for workers in [1, many] {
        let start = Instant::now();
        let opts = SweepOptions {
            workers,
            ..Default::default()
        };
        let r = render_parameter_plane(FamilyKind::Kim4, &window, &cfg, &palette, false, &opts)
            .map_err(|e| e.to_string())?;
        let t = within(Duration::from_secs(60), start)?;
        results.push((r, t));
    }
    let ((g1, i1), t1) = &results[0];
    let ((gn, in_), tn) = &results[1];
    check(i1 == in_, "rasters differ between worker counts".into())?;
    check(g1 == gn, "grids differ between worker counts".into())?;
    Ok(format!(
        "1000x1000 kim identical with 1 and {many} workers ({t1:.1} s, {tn:.1} s)"
    ))
}

fn boundary_pixels(classes: &[StabilityClass], w: usize, h: usize) -> Vec<(usize, usize)> {
    let green = |i: usize, j: usize| classes[j * w + i] == StabilityClass::Stable;
    let mut out = Vec::new();
    for j in 0..h {
        for i in 0..w {
            let g = green(i, j);
            let flip = (i + 1 < w && green(i + 1, j) != g) || (j + 1 < h && green(i, j + 1) != g);
            if flip {
                out.push((i, j));
            }
        }
    }
    out
}

fn ac11_stability_boundaries() -> Outcome {
    let palette = Palette::default();
    let kim = Window::new(FamilyKind::Kim4.default_parameter_window(), 400, 400)
        .map_err(|e| e.to_string())?;
    let (classes, _) =
        render_stability_map(FamilyKind::Kim4, &kim, &palette, 0).map_err(|e| e.to_string())?;
    let edges = boundary_pixels(&classes, kim.width, kim.height);
    let px = kim.pixel_width().max(kim.pixel_height());
    let mut worst: f64 = 0.0;
    for &(i, j) in &edges {
        let a = kim.point(i, j);
        let off = ((a - 16.0).norm() - 64.0).abs();
        check(
            off <= px,
            format!("kim boundary pixel at {a} is {off:.3} from the circle (pixel {px:.3})"),
        )?;
        worst = worst.max(off / px);
    }
    check(!edges.is_empty(), "kim map has no boundary".into())?;
    let kim_edges = edges.len();

    let erm = Window::new(
        FamilyKind::ErmakovKalitkin.default_parameter_window(),
        400,
        400,
    )
    .map_err(|e| e.to_string())?;
    let (classes, _) = render_stability_map(FamilyKind::ErmakovKalitkin, &erm, &palette, 0)
        .map_err(|e| e.to_string())?;
    let edges = boundary_pixels(&classes, erm.width, erm.height);
    check(
        edges.len() >= 50,
        format!("ermakov map has only {} boundary pixels", edges.len()),
    )?;
    let h = erm.pixel_width().max(erm.pixel_height());
    let stride = edges.len() / 50;
    for &(i, j) in edges.iter().step_by(stride).take(50) {
        let a = erm.point(i, j);
        let (x, y) = (a.re, a.im);
        let f = 16.0 - 32.0 * x + 15.0 * x * x + x * x * x + 17.0 * y * y + x * y * y;
        let grad = (-32.0 + 30.0 * x + 3.0 * x * x + y * y).hypot(34.0 * y + 2.0 * x * y);
        check(
            f.abs() <= 2.0 * h * grad,
            format!(
                "ermakov boundary pixel at {a}: |F| = {:.3e} > {:.3e}",
                f.abs(),
                2.0 * h * grad
            ),
        )?;
    }
    Ok(format!(
        "kim: {} boundary pixels, worst {:.2} px from |a-16|=64; ermakov: 50 boundary pixels on the curve",
        kim_edges, worst
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("AC1 symmetry law", ac1_symmetry_law),
        (
            "AC2 palindromic derivative numerator",
            ac2_palindromic_derivative,
        ),
        ("AC3 closed-form critical points", ac3_critical_equivalence),
        ("AC4 kim multiplier circle", ac4_kim_circle),
        ("AC5 ermakov parabolic point", ac5_ermakov_parabolic),
        ("AC6 pixel classifications", ac6_pixel_classifications),
        ("AC7 capture and disjoint parameters", ac7_capture_disjoint),
        ("AC8 strange fixed points", ac8_strange_fixed_points),
        ("AC9 sixth-order reduction", ac9_sixth_reduction),
        ("AC10 determinism and performance", ac10_determinism),
        ("AC11 stability-map boundaries", ac11_stability_boundaries),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
