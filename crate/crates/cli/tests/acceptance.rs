//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::panic;
use std::process::Command;
use std::time::Instant;

use hopf_qubit::braket::{evaluate, format_state, parse_state};
use hopf_qubit::catalog;
use hopf_qubit::cd::{self, CdElement};
use hopf_qubit::fibration::{base_coordinates, e_measure};
use hopf_qubit::oracle;
use hopf_qubit::state::{bring_to_front, permute_qubits, random_state_at};
use hopf_qubit::QubitState;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(x: impl std::fmt::Debug) -> String {
    format!("{x:?}")
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (j, &p) in perm.iter().enumerate() {
        inv[p] = j;
    }
    inv
}

/// Random one-qubit state placed at position `k`, tensored with a random state on the rest.
fn product_at(n: usize, k: usize, seed: u64, i: u64) -> QubitState {
    let one = random_state_at(1, seed, 2 * i).unwrap();
    let rest = random_state_at(n - 1, seed, 2 * i + 1).unwrap();
    let front = one.tensor(&rest).unwrap();
    permute_qubits(&front, &inverse(&bring_to_front(n, k).unwrap())).unwrap()
}

fn hopfq(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hopfq"))
        .args(args)
        .output()
        .expect("run hopfq")
}

fn c1_example_table() -> Check {
    let first = hopfq(&["verify-paper", "--format", "json"]);
    let second = hopfq(&["verify-paper", "--format", "json"]);
    ensure(first.status.success(), "verify-paper failed")?;
    ensure(first.stdout == second.stdout, "output differs between runs")?;
    let rows: serde_json::Value = serde_json::from_slice(&first.stdout).map_err(e)?;
    let rows = rows.as_array().ok_or("expected an array")?;
    let find = |label: &str| {
        rows.iter()
            .find(|r| r["label"] == label && r["quantity"] == "E")
            .ok_or(format!("no row {label}"))
    };
    let val = |r: &serde_json::Value, k: &str| r[k].as_f64().ok_or(format!("missing {k}"));
    let ghz = val(find("GHZ4")?, "computed_e_complement")?;
    let w1 = val(find("W1")?, "computed_e_complement")?;
    ensure((ghz - 1.0).abs() < 1e-12, format!("E(GHZ4) = {ghz}"))?;
    ensure((w1 - 0.75).abs() < 1e-12, format!("E(W1) = {w1}"))?;
    let mut summary = vec![format!("GHZ4 {ghz}"), format!("W1 {w1}")];
    for label in ["W0", "Phi1", "Phi2", "Phi2 (printed prefactor)"] {
        let r = find(label)?;
        let published = val(r, "paper_value")?;
        let ec = val(r, "computed_e_complement")?;
        val(r, "computed_e_sum")?;
        let flag = r["match"].as_bool().ok_or("missing match flag")?;
        ensure(flag == ((ec - published).abs() < 1e-3), format!("{label}: flag inconsistent"))?;
        summary.push(format!("{label} {ec:.4} vs {published:.4} ({})", if flag { "match" } else { "mismatch" }));
    }
    Ok(summary.join(", "))
}

fn c2_tangle_equivalence() -> Check {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let s = random_state_at(3, 2, i).unwrap();
        let diff = (e_measure(&s).unwrap().e_complement - oracle::tau_one_rest(&s, 0).unwrap()).abs();
        worst = worst.max(diff);
    }
    ensure(worst < 1e-9, format!("max deviation {worst:e}"))?;
    Ok(format!("max |E - 4 det rho_A| = {worst:.2e}"))
}

fn c3_concurrence() -> Check {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let s = random_state_at(2, 3, i).unwrap();
        let c = oracle::concurrence(&s).unwrap();
        worst = worst.max((e_measure(&s).unwrap().e_complement - c * c).abs());
    }
    ensure(worst < 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("max |E - C^2| = {worst:.2e}"))
}

fn c4_base_sphere() -> Check {
    let mut sphere = 0.0f64;
    for n in [2, 3] {
        for i in 0..1000 {
            sphere = sphere.max(base_coordinates(&random_state_at(n, 4, i).unwrap()).sphere_residual().abs());
        }
    }
    let mut defect = 0.0f64;
    for i in 0..1000 {
        let c = base_coordinates(&random_state_at(4, 4, i).unwrap());
        defect = defect.max((c.e_complement - c.e_sum - c.norm_defect).abs());
    }
    ensure(sphere < 1e-9, format!("sphere residual {sphere:e}"))?;
    ensure(defect < 1e-12, format!("defect identity residual {defect:e}"))?;
    Ok(format!("sphere residual {sphere:.2e}, defect identity residual {defect:.2e}"))
}

fn c5_sensitivity() -> Check {
    let mut worst_product = 0.0f64;
    let mut best_generic = f64::INFINITY;
    for n in 2..=4 {
        for k in 0..n {
            for i in 0..500 {
                let s = product_at(n, k, 50 + n as u64, i);
                let front = permute_qubits(&s, &bring_to_front(n, k).unwrap()).unwrap();
                let ec = base_coordinates(&front).e_complement.abs();
                worst_product = worst_product.max(ec);
                ensure(ec < 1e-9, format!("n={n} qubit {k} sample {i}: E = {ec:e}"))?;
                ensure(
                    oracle::separable_one_rest(&s, k, 1e-9).unwrap(),
                    format!("n={n} qubit {k} sample {i}: minor test failed"),
                )?;
            }
        }
        for i in 0..500 {
            let s = random_state_at(n, 60, i).unwrap();
            let ec = base_coordinates(&s).e_complement;
            best_generic = best_generic.min(ec);
            ensure(ec > 1e-6, format!("generic n={n} sample {i}: E = {ec:e}"))?;
            ensure(
                !oracle::separable_one_rest(&s, 0, 1e-9).unwrap(),
                format!("generic n={n} sample {i}: minor test passed"),
            )?;
        }
    }
    Ok(format!("products max E {worst_product:.2e}, generic min E {best_generic:.2e}"))
}

fn random_element(rng: &mut ChaCha8Rng, level: u8) -> CdElement {
    let coeffs: Vec<f64> = (0..1usize << level).map(|_| rng.random_range(-1.0..1.0)).collect();
    CdElement::new(level, &coeffs).unwrap()
}

fn c6_division_boundary() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for level in 1..=3 {
        for _ in 0..1000 {
            let (x, y) = (random_element(&mut rng, level), random_element(&mut rng, level));
            let prod = x.norm_sq() * y.norm_sq();
            let rel = ((x * y).norm_sq() - prod).abs() / prod.max(1.0);
            worst = worst.max(rel);
        }
    }
    ensure(worst < 1e-12, format!("norm multiplicativity residual {worst:e}"))?;
    for level in 1..=3 {
        let found = cd::find_basis_zero_divisors(level).unwrap();
        ensure(found.is_empty(), format!("level {level} has {} zero divisors", found.len()))?;
    }
    let sedenion = cd::find_basis_zero_divisors(4).unwrap();
    ensure(!sedenion.is_empty(), "no sedenion zero divisors found")?;
    Ok(format!("residual {worst:.2e}; levels 1-3 none; level 4 {} pairs", sedenion.len()))
}

fn c7_classification() -> Check {
    let ghz = catalog::GHZ3.state().unwrap();
    let w = catalog::W3.state().unwrap();
    let bisep = catalog::ZERO_BELL.state().unwrap();
    let t = oracle::three_tangle(&ghz).unwrap();
    ensure((t - 1.0).abs() < 1e-12, format!("tau_ABC(GHZ3) = {t}"))?;
    for x in oracle::two_tangles(&ghz).unwrap() {
        ensure((x - 1.0).abs() < 1e-12, format!("GHZ3 two-tangle {x}"))?;
    }
    let t = oracle::three_tangle(&w).unwrap();
    ensure(t < 1e-12, format!("tau_ABC(W3) = {t}"))?;
    for x in oracle::two_tangles(&w).unwrap() {
        ensure((x - 8.0 / 9.0).abs() < 1e-12, format!("W3 two-tangle {x}"))?;
    }
    let t = oracle::three_tangle(&bisep).unwrap();
    let [ta, tb, _] = oracle::two_tangles(&bisep).unwrap();
    ensure(t < 1e-12, format!("tau_ABC(|0>Bell) = {t}"))?;
    ensure(ta < 1e-12, format!("tau_A(BC)(|0>Bell) = {ta}"))?;
    ensure((tb - 1.0).abs() < 1e-12, format!("tau_B(CA)(|0>Bell) = {tb}"))?;
    Ok("GHZ3, W3 and |0>(x)Bell tangles as expected".into())
}

fn c8_ball() -> Check {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let c = base_coordinates(&random_state_at(4, 8, i).unwrap());
        worst = worst.max((c.ball_radius_sq() - (1.0 - c.e_complement)).abs());
    }
    ensure(worst < 1e-12, format!("radius identity residual {worst:e}"))?;
    let ghz = base_coordinates(&catalog::GHZ4.state().unwrap());
    ensure(ghz.ball() == [0.0, 0.0, 0.0], format!("GHZ4 ball {:?}", ghz.ball()))?;
    let mut boundary = 0.0f64;
    for i in 0..500 {
        let c = base_coordinates(&product_at(4, 0, 80, i));
        boundary = boundary.max((c.ball_radius_sq() - 1.0).abs());
    }
    ensure(boundary < 1e-9, format!("product radius deviation {boundary:e}"))?;
    Ok(format!("radius identity {worst:.2e}; GHZ4 at origin; products on boundary within {boundary:.2e}"))
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    const PIECES: [&str; 22] = [
        "|0", "|1", ">", "⟩", "|01>", "|0000>", "(", ")", "+", "-", "*", "/", "i", "sqrt", "√", "2", "0.5", "1e3",
        " ", "\n", ".", "e",
    ];
    if rng.random_bool(0.5) {
        let len = rng.random_range(0..40);
        let bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
        String::from_utf8_lossy(&bytes).into_owned()
    } else {
        let len = rng.random_range(0..25);
        (0..len).map(|_| PIECES[rng.random_range(0..PIECES.len())]).collect()
    }
}

fn c9_parser() -> Check {
    let mut corpus: Vec<QubitState> = Vec::new();
    let mut worst = 0.0f64;
    for named in catalog::ALL {
        if named.normalized {
            corpus.push(named.state().unwrap());
        } else {
            let s = named.state().unwrap();
            let (_, back) = evaluate(&format_state(&s, 17)).map_err(e)?;
            for (a, b) in s.amps().iter().zip(&back) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    for n in 1..=4 {
        corpus.extend((0..1000).map(|i| random_state_at(n, 9, i).unwrap()));
    }
    for s in &corpus {
        let back = parse_state(&format_state(s, 17)).map_err(e)?;
        for (a, b) in s.amps().iter().zip(back.amps()) {
            worst = worst.max((a - b).norm());
        }
    }
    ensure(worst < 1e-12, format!("round-trip deviation {worst:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let inputs: Vec<String> = (0..100_000).map(|_| random_text(&mut rng)).collect();
    let prev = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut crashes = 0;
    let mut parsed = 0;
    for text in &inputs {
        match panic::catch_unwind(|| parse_state(text)) {
            Ok(Ok(_)) => parsed += 1,
            Ok(Err(_)) => {}
            Err(_) => crashes += 1,
        }
    }
    panic::set_hook(prev);
    ensure(crashes == 0, format!("{crashes} fuzz inputs panicked"))?;
    Ok(format!(
        "{} states round-trip within {worst:.2e}; 100000 fuzz inputs, {parsed} valid, 0 crashes",
        corpus.len()
    ))
}

fn c10_bloch() -> Check {
    let mut worst = 0.0f64;
    for i in 0..500 {
        let a = random_state_at(1, 10, 2 * i).unwrap();
        let b = random_state_at(1, 10, 2 * i + 1).unwrap();
        let s = a.tensor(&b).unwrap();
        let [a0, a1]: [Complex64; 2] = a.amps().try_into().unwrap();
        let r = a0.conj() * a1;
        let bloch = [2.0 * r.re, 2.0 * r.im, a0.norm_sqr() - a1.norm_sqr()];
        let c = base_coordinates(&s);
        for (x, y) in c.ball().iter().zip(bloch) {
            worst = worst.max((x - y).abs());
        }
    }
    ensure(worst < 1e-12, format!("Bloch deviation {worst:e}"))?;
    Ok(format!("(comps[0], comps[1], delta) = (x, y, z) within {worst:.2e}"))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("example table", c1_example_table),
        ("fibration-tangle equivalence, 3 qubits", c2_tangle_equivalence),
        ("concurrence link, 2 qubits", c3_concurrence),
        ("base-sphere normalization and defect identity", c4_base_sphere),
        ("entanglement sensitivity", c5_sensitivity),
        ("division-algebra boundary", c6_division_boundary),
        ("tangle classification", c7_classification),
        ("ball map", c8_ball),
        ("parser round-trip and fuzz", c9_parser),
        ("Bloch reduction", c10_bloch),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
