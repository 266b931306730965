//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use apsidon::construct::{build_chain, verify_kernel, Progression};
use apsidon::epoly::{bnorm2_sq, bnorm4_pow4, sum_abs_pow4, EPolynomial, Gaussian};
use apsidon::lemma3::{fat_cantor, find_patterned_ap, gap_probes, verify_pattern, Pattern};
use apsidon::mappings::{cantor_eval, Mapping};
use apsidon::rational::{self, int, ratio, Rational};
use apsidon::search::{SearchConfig, DEFAULT_BUDGET};
use apsidon::sets::{count_quadruples, dirichlet_gamma4_pow4, dirichlet_ratio_pow4, is_sidon};
use num::{BigUint, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    let mut non_sidon = 0;
    for i in 0..1000 {
        // every other set uses tiny denominators so that relations actually occur
        let den = if i % 2 == 0 { 100 } else { 3 };
        let e = common::random_elements(&mut rng, 10, 20, den);
        let s = common::set(&e);
        let brute_sidon = common::is_sidon(&e);
        if !brute_sidon {
            non_sidon += 1;
        }
        if is_sidon(&s) != brute_sidon || count_quadruples(&s) != BigUint::from(common::quadruples(&e)) {
            mismatches += 1;
        }
    }
    let detail = format!("1000 sets ({non_sidon} not Sidon), {mismatches} mismatches");
    if mismatches == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn norm_estimate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let support = common::random_sidon(&mut rng, n);
        let f = EPolynomial::from_terms(support.into_iter().map(|l| {
            let re = common::random_rational(&mut rng, 50, 20);
            let im = common::random_rational(&mut rng, 50, 20);
            (l, Gaussian::new(re, im))
        }));
        let b2 = bnorm2_sq(&f);
        let b4 = bnorm4_pow4(&f);
        let brute = common::bnorm4_pow4(&f);
        let identity = b4 == int(2) * &b2 * &b2 - sum_abs_pow4(&f);
        if !identity || brute.re != b4 || !num::Zero::is_zero(&brute.im) || b4 > int(2) * &b2 * &b2 {
            violations += 1;
        }
    }
    let detail = format!("200 polynomials, {violations} violations of B4^4 = 2 B2^4 - sum |c|^4");
    if violations == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dirichlet_growth() -> Outcome {
    for n in 1..=12u64 {
        let closed = dirichlet_gamma4_pow4(n).map_err(|e| e.to_string())?;
        if closed != BigUint::from(common::dirichlet(n as i64)) {
            return Err(format!("N = {n}: closed form {closed} disagrees with brute force"));
        }
    }
    let ratio: f64 = rational::decimal_root(&dirichlet_ratio_pow4(100).unwrap(), 4, 12).parse().unwrap();
    let limit = (2.0f64 / 3.0).powf(0.25);
    let err = (ratio - limit).abs();
    let detail = format!("N <= 12 exact; N = 100 ratio {ratio:.6}, |ratio - (2/3)^(1/4)| = {err:.6}");
    if err < 0.005 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn kernel_claim() -> Outcome {
    let r = verify_kernel(20);
    let detail = format!("{} tuples x 7 vectors, {} counterexamples", r.tuples_checked, r.counterexamples.len());
    if r.tuples_checked == 116_280 && r.passed() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn chain_witness() -> Outcome {
    let phi = Mapping::square();
    let state = build_chain(&phi, 10, &SearchConfig::new(DEFAULT_BUDGET, 7)).map_err(|e| e.to_string())?;
    state.verify().map_err(|e| e.to_string())?;
    let mut all: Vec<Rational> = Vec::new();
    for (i, st) in state.stages().iter().enumerate() {
        let image = st.progression.image_values(&phi);
        if st.n() != i + 4 || common::set(&image).len() != st.n() {
            return Err(format!("stage {i}: |B_n| != n"));
        }
        if image.iter().any(|v| all.contains(v)) {
            return Err(format!("B_{} meets an earlier image", st.n()));
        }
        all.extend(image);
    }
    if !common::is_sidon(&all) {
        return Err("union of images is not Sidon".into());
    }
    Ok(format!("A_4..A_10 found, |M| = {}, M Sidon by brute force", all.len()))
}

fn affine_obstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let a = loop {
            let a = common::random_rational(&mut rng, 100, 50);
            if !num::Zero::is_zero(&a) {
                break a;
            }
        };
        let phi = Mapping::affine(a, common::random_rational(&mut rng, 100, 50));
        let y = loop {
            let y = common::random_rational(&mut rng, 100, 50);
            if !num::Zero::is_zero(&y) {
                break y;
            }
        };
        let n = rng.gen_range(4..=10);
        let p = Progression::new(common::random_rational(&mut rng, 100, 50), y, n).unwrap();
        if is_sidon(&common::set(&p.image_values(&phi))) {
            return Err(format!("{phi} on {p} has a Sidon image"));
        }
    }
    Ok("50 affine maps, every image non-Sidon".into())
}

fn cantor_evaluator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let q = rng.gen_range(1..=1_000_000i64);
        let t = ratio(rng.gen_range(0..=q), q);
        let c = cantor_eval(&t).map_err(|e| e.to_string())?;
        if cantor_eval(&(&t / int(3))).unwrap() != &c / int(2) {
            return Err(format!("c(t/3) != c(t)/2 at t = {t}"));
        }
        if cantor_eval(&(Rational::one() - &t)).unwrap() != Rational::one() - &c {
            return Err(format!("c(1-t) != 1-c(t) at t = {t}"));
        }
    }
    if cantor_eval(&ratio(1, 4)).unwrap() != ratio(1, 3) {
        return Err("c(1/4) != 1/3".into());
    }
    Ok("1000 rationals, both identities exact; c(1/4) = 1/3".into())
}

fn lemma3_instance() -> Outcome {
    let (e1, e2) = (fat_cantor(4), gap_probes(4));
    let pattern = Pattern::alternating(8).unwrap();
    match find_patterned_ap(&e1, &e2, &pattern, &SearchConfig::new(DEFAULT_BUDGET, 1)) {
        Ok(found) => {
            let (x, y) = (&found.value.x, &found.value.y);
            verify_pattern(&e1, &e2, &pattern, x, y).map_err(|r| format!("witness fails re-verification: {r}"))?;
            Ok(format!("x = {x}, y = {y} after {} candidates", found.candidates_tried))
        }
        Err(f) => {
            Err(format!("{f} (four even terms would need four gap probes on one progression; none exist at m = 4)"))
        }
    }
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_apsidon"))
            .args(["build-chain", "--phi", "poly:0,0,1", "--n-max", "6", "--seed", "7"])
            .env_remove("APSIDON_SEED")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(format!("exit {:?}", a.status.code()));
    }
    if a.stdout == b.stdout {
        Ok(format!("{} bytes, identical", a.stdout.len()))
    } else {
        Err("outputs differ".into())
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", 10, oracle_equivalence),
        ("norm estimate on Sidon supports", 0, norm_estimate),
        ("Dirichlet growth", 1, dirichlet_growth),
        ("kernel claim K = 20", 5, kernel_claim),
        ("chain witness t^2, n_max = 10", 60, chain_witness),
        ("affine obstruction", 1, affine_obstruction),
        ("Cantor evaluator", 5, cantor_evaluator),
        ("patterned progression N = 8, m = 4", 30, lemma3_instance),
        ("determinism of build-chain", 0, determinism),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let in_time = limit == 0 || elapsed < Duration::from_secs(limit);
        let timing = if limit == 0 {
            format!("{:.2} s", elapsed.as_secs_f64())
        } else {
            format!("{:.2} s, limit {limit} s", elapsed.as_secs_f64())
        };
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        let note = if ok && !in_time { " [too slow]" } else { "" };
        println!("{} {name}: {detail} ({timing}){note}", if pass { "PASS" } else { "FAIL" });
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
