//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::thread;
use std::time::{Duration, Instant};

use lds_core::kernel::{count_roots_in_disk, Matrix, MultiPoly, Rational};
use lds_core::logic::{muller_accepts_lasso, MullerAutomaton};
use lds_core::lrs::Lrs;
use lds_core::orbit::{reach_point, LassoWord, Lds, ReachVerdict};
use lds_core::verify::{check_decomposition, polynomial_sequence};
use lds_core::zeroset::skolem;
use lds_core::Budget;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Outcome = Result<String, String>;

const FIBONACCI_LIMIT: Duration = Duration::from_secs(5);
const RANDOM_LRS_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_LRS_CASES: usize = 120;
const BRUTE_FORCE_N: u64 = 5000;
const POSITIVITY_N: i64 = 200;
const PERTURBATION_N: i64 = 5;
const H10_N: u64 = 1000;
const REACH_CASES: usize = 50;
const WORD_LETTERS: usize = 2000;
const LASSO_SAMPLES: usize = 100;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(s: &str) -> Rational {
    lds_core::kernel::parse_rational(s).unwrap()
}

fn qs(v: &[Rational]) -> Vec<String> {
    v.iter().map(lds_core::kernel::format_rational).collect()
}

struct Workspace {
    dir: tempfile::TempDir,
    files: usize,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
            files: 0,
        }
    }

    fn write(&mut self, v: &Value) -> String {
        self.files += 1;
        let p: PathBuf = self.dir.path().join(format!("f{}.json", self.files));
        std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
        p.to_string_lossy().into_owned()
    }

    /// Runs `ldskit --json args...` and returns the envelope and exit code.
    fn cli(&self, args: &[&str]) -> (Value, i32) {
        let mut full = vec!["ldskit", "--json"];
        full.extend_from_slice(args);
        let out = lds_cli::run(full);
        (serde_json::from_str(&out.text).unwrap(), out.code)
    }

    fn verify(&mut self, envelope: &Value, instance: &str) -> (Value, i32) {
        let cert = self.write(envelope);
        self.cli(&["verify", &cert, instance])
    }
}

// ---------------------------------------------------------------- 1

fn fibonacci() -> Outcome {
    let mut ws = Workspace::new();
    let inst = ws.write(&json!({"format": "lds-toolkit/1", "lrs": {"coeffs": ["1", "1"], "init": ["0", "1"]}}));
    let clock = Instant::now();
    let (env, code) = ws.cli(&["zeros", &inst]);
    let (ver, vcode) = ws.verify(&env, &inst);
    let elapsed = clock.elapsed();
    let p = &env["payload"];
    ensure(code == 0, || format!("exit {code}"))?;
    ensure(p["exceptional"] == json!([0]), || format!("exceptional {}", p["exceptional"]))?;
    ensure(p["progressions"] == json!([]), || format!("progressions {}", p["progressions"]))?;
    ensure(p["status"] == json!("complete"), || format!("status {}", p["status"]))?;
    let certs = env["certificates"].as_array().map_or(0, Vec::len);
    ensure(certs > 0, || "no certificate emitted".into())?;
    ensure(vcode == 0, || format!("verify exit {vcode}: {}", ver["error"]))?;
    ensure(elapsed < FIBONACCI_LIMIT, || format!("{elapsed:?} exceeds {FIBONACCI_LIMIT:?}"))?;
    Ok(format!("exceptional [0], {certs} certificate(s) verified, {} ms", elapsed.as_millis()))
}

// ---------------------------------------------------------------- 2

fn brute_zeros(coeffs: &[i64], init: &[i64], n: u64) -> Vec<bool> {
    let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
    let mut u: Vec<BigInt> = init.iter().map(|&x| BigInt::from(x)).collect();
    while (u.len() as u64) <= n {
        let k = u.len();
        let next = c.iter().enumerate().map(|(i, ci)| ci * &u[k - 1 - i]).sum();
        u.push(next);
    }
    u.iter().map(Zero::is_zero).collect()
}

fn random_lrs(rng: &mut ChaCha8Rng) -> (Vec<i64>, Vec<i64>) {
    let d = rng.gen_range(1..=4);
    let mut coeffs: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
    while coeffs[d - 1] == 0 {
        coeffs[d - 1] = rng.gen_range(-5..=5);
    }
    let mut init: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
    if d >= 2 && rng.gen_bool(0.25) {
        // Only even lags: every other term vanishes when the odd seeds do.
        for (i, c) in coeffs.iter_mut().enumerate() {
            if i % 2 == 0 {
                *c = 0;
            }
        }
        if coeffs[d - 1] == 0 {
            coeffs.pop();
            init.pop();
        }
        for (i, x) in init.iter_mut().enumerate() {
            if i % 2 == 1 {
                *x = 0;
            }
        }
    }
    (coeffs, init)
}

fn random_lrs_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let budget = Budget::default();
    let clock = Instant::now();
    let (mut complete, mut with_zeros, mut with_progressions) = (0, 0, 0);
    for case in 0..RANDOM_LRS_CASES {
        let (coeffs, init) = random_lrs(&mut rng);
        let lrs = Lrs::from_i64(&coeffs, &init);
        let dec = skolem(&lrs, &budget).map_err(|e| format!("case {case} {coeffs:?}/{init:?}: {e}"))?;
        let zeros = brute_zeros(&coeffs, &init, BRUTE_FORCE_N);
        if let Some(n) = (0..=BRUTE_FORCE_N).find(|&n| dec.contains(n) != zeros[n as usize]) {
            return Err(format!("case {case} {coeffs:?}/{init:?}: prediction wrong at n = {n}"));
        }
        if dec.is_complete() {
            complete += 1;
            check_decomposition(&lrs, &dec).map_err(|e| format!("case {case}: certificate rejected: {e}"))?;
        }
        with_zeros += usize::from(zeros.iter().any(|&z| z));
        with_progressions += usize::from(!dec.progressions.is_empty());
    }
    let elapsed = clock.elapsed();
    ensure(elapsed < RANDOM_LRS_LIMIT, || format!("{elapsed:?} exceeds {RANDOM_LRS_LIMIT:?}"))?;
    Ok(format!(
        "{RANDOM_LRS_CASES} sequences, 0 mismatches to n = {BRUTE_FORCE_N}, {complete} complete, \
         {with_zeros} with zeros, {with_progressions} with progressions, {:.1} s",
        elapsed.as_secs_f64()
    ))
}

// ---------------------------------------------------------------- 3

#[derive(Clone, Debug, PartialEq)]
struct Complex(Rational, Rational);

impl Complex {
    fn mul(&self, o: &Complex) -> Complex {
        Complex(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }

    fn conj(&self) -> Complex {
        Complex(self.0.clone(), -self.1.clone())
    }

    /// `self^n` for `n >= -1`, using `|self| = 1` at `n = -1`.
    fn pow(&self, n: i64) -> Complex {
        if n < 0 {
            return self.conj();
        }
        (0..n).fold(Complex(Rational::one(), Rational::zero()), |acc, _| acc.mul(self))
    }
}

fn positivity_matrix(l: &Complex) -> Vec<Vec<Rational>> {
    let (a, b) = (l.0.clone(), l.1.clone());
    let (z, o) = (Rational::zero(), Rational::one());
    vec![
        vec![a.clone(), -b.clone(), o.clone(), z.clone()],
        vec![b.clone(), a.clone(), z.clone(), o],
        vec![z.clone(), z.clone(), a.clone(), -b.clone()],
        vec![z.clone(), z, b, a],
    ]
}

fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `p` from the target set, or `None` where its denominator vanishes.
fn positivity_p(l: &Complex, r: &Rational, x: &[Rational]) -> Option<Rational> {
    let inv = l.conj();
    let den = &inv.0 * &x[2] - &inv.1 * &x[3];
    if den.is_zero() {
        return None;
    }
    let two = Rational::from_integer(2.into());
    Some(r / &two * (&x[3] - &x[2]) - (&x[0] - &x[2]) / den * (Rational::one() - (&x[2] + &x[3]) / two))
}

fn positivity_u(l: &Complex, r: &Rational, n: i64) -> Rational {
    let ln = l.pow(n);
    r * &ln.1 - Rational::from_integer(n.into()) * (Rational::one() - &ln.0)
}

/// Closed form of `M^n x`.
fn positivity_orbit_point(l: &Complex, n: i64) -> Vec<Rational> {
    let (ln, lp) = (l.pow(n), l.pow(n - 1));
    let nn = Rational::from_integer(n.into());
    vec![
        &ln.0 - &ln.1 + &nn * &lp.0 - &nn * &lp.1,
        &ln.1 + &ln.0 + &nn * &lp.1 + &nn * &lp.0,
        &ln.0 - &ln.1,
        &ln.1 + &ln.0,
    ]
}

/// First `n <= limit` where `p(M^n x)` is defined and differs from `u_n`.
fn identity_breaks(m: &[Vec<Rational>], l: &Complex, r: &Rational, limit: i64) -> Option<i64> {
    let mut x = vec![Rational::one(); 4];
    for n in 0..=limit {
        if let Some(p) = positivity_p(l, r, &x) {
            if p != positivity_u(l, r, n) {
                return Some(n);
            }
        }
        x = mat_vec(m, &x);
    }
    None
}

fn positivity_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut ws = Workspace::new();
    let ts = [
        "1/2", "1/3", "2/3", "1/4", "3/4", "1/5", "2/5", "3/5", "4/5", "1/6", "5/6", "1/7", "2/7", "3/7", "4/7",
        "5/7", "6/7", "2", "3", "3/2",
    ];
    let (mut skipped, mut perturbations) = (0, 0);
    for t in ts {
        let t = q(t);
        let den = Rational::one() + &t * &t;
        let l = Complex((Rational::one() - &t * &t) / &den, (&t + &t) / &den);
        let r = Rational::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=9).into());
        let inst = ws.write(&json!({
            "reduction": {"kind": "positivity", "lambda": {"re": qs(&[l.0.clone()])[0], "im": qs(&[l.1.clone()])[0]}, "r": qs(&[r.clone()])[0]}
        }));
        let (env, code) = ws.cli(&["reduce", "--bound", &POSITIVITY_N.to_string(), &inst]);
        ensure(code == 0, || format!("t = {t}: exit {code}: {}", env["error"]))?;
        ensure(env["payload"]["identity_holds"] == json!(true), || format!("t = {t}: engine reports identity failure"))?;

        let m = positivity_matrix(&l);
        let emitted: Matrix = serde_json::from_value(env["payload"]["instance"]["lds"]["matrix"].clone()).unwrap();
        ensure(emitted.to_rows() == m, || format!("t = {t}: emitted matrix differs"))?;
        ensure(env["payload"]["instance"]["lds"]["start"] == json!(["1", "1", "1", "1"]), || format!("t = {t}: start"))?;

        let mut x = vec![Rational::one(); 4];
        for n in 0..=POSITIVITY_N {
            ensure(x == positivity_orbit_point(&l, n), || format!("t = {t}: orbit closed form fails at n = {n}"))?;
            match positivity_p(&l, &r, &x) {
                Some(p) => ensure(p == positivity_u(&l, &r, n), || format!("t = {t}, r = {r}: identity fails at n = {n}"))?,
                None => skipped += 1,
            }
            x = mat_vec(&m, &x);
        }

        for i in 0..4 {
            for j in 0..4 {
                let mut bad = m.clone();
                bad[i][j] += Rational::new(1.into(), 7.into());
                perturbations += 1;
                ensure(identity_breaks(&bad, &l, &r, PERTURBATION_N).is_some(), || {
                    format!("t = {t}: perturbing entry ({i},{j}) keeps the identity to n = {PERTURBATION_N}")
                })?;
            }
        }
    }
    Ok(format!(
        "{} lambdas, identity exact to n = {POSITIVITY_N} ({skipped} undefined indices skipped), \
         {perturbations}/{perturbations} perturbations break it by n = {PERTURBATION_N}",
        ts.len()
    ))
}

// ---------------------------------------------------------------- 4

fn h10_case(ws: &mut Workspace, polynomial: &str, witness: [&str; 2]) -> Result<(Vec<u64>, Value), String> {
    let inst = ws.write(&json!({"reduction": {"kind": "h10", "polynomial": polynomial, "witness": witness}}));
    let (env, code) = ws.cli(&["reduce", "--bound", &H10_N.to_string(), &inst]);
    ensure(code == 0, || format!("witness {witness:?}: exit {code}: {}", env["error"]))?;
    let hits: Vec<u64> = serde_json::from_value(env["payload"]["hits"].clone()).unwrap();
    ensure(env["payload"]["count"] == json!(hits.len()), || "count disagrees with hits".into())?;

    // First coordinate of the orbit against (n - y_1)(n - y_2).
    let lds = &env["payload"]["instance"]["lds"];
    let m: Matrix = serde_json::from_value(lds["matrix"].clone()).unwrap();
    let m = m.to_rows();
    let mut x: Vec<Rational> = lds["start"].as_array().unwrap().iter().map(|v| q(v.as_str().unwrap())).collect();
    let (y1, y2) = (q(witness[0]), q(witness[1]));
    let mut brute = Vec::new();
    for n in 0..=H10_N {
        let nn = Rational::from_integer(n.into());
        let v = (&nn - &y1) * (&nn - &y2);
        ensure(x[0] == v, || format!("witness {witness:?}: first coordinate wrong at n = {n}"))?;
        if v.is_zero() {
            brute.push(n);
        }
        x = mat_vec(&m, &x);
    }
    ensure(hits == brute, || format!("witness {witness:?}: hits {hits:?}, brute force {brute:?}"))?;

    // The full zero set on the hyperplane, certified and replayed.
    let hp = ws.write(&json!({"lds": lds, "hyperplane": {"normal": env["payload"]["instance"]["normal"], "offset": "0"}}));
    let (henv, hcode) = ws.cli(&["hyperplane", &hp]);
    ensure(hcode == 0, || format!("witness {witness:?}: hyperplane exit {hcode}: {}", henv["error"]))?;
    let (ver, vcode) = ws.verify(&henv, &hp);
    ensure(vcode == 0, || format!("witness {witness:?}: hyperplane certificate rejected: {}", ver["error"]))?;
    Ok((hits, env["payload"]["instance"].clone()))
}

fn h10_reduction() -> Outcome {
    let mut ws = Workspace::new();
    let (hits, inst) = h10_case(&mut ws, "z1*z2 - 10", ["2", "5"])?;
    ensure(hits == [2, 5], || format!("hits {hits:?}"))?;
    ensure(inst["d"] == json!(3) && inst["k"] == json!(2), || format!("d = {}, k = {}", inst["d"], inst["k"]))?;
    ensure(inst["witness_is_root"] == json!(true), || "witness should be a root".into())?;
    let (none, _) = h10_case(&mut ws, "2*z1 - 1", ["1/2", "7/3"])?;
    ensure(none.is_empty(), || format!("non-natural witness hits {none:?}"))?;
    let (neg, _) = h10_case(&mut ws, "z1 + z2 + 7", ["-3", "-4"])?;
    ensure(neg.is_empty(), || format!("negative witness hits {neg:?}"))?;
    Ok(format!(
        "witness (2,5) hits exactly {{2,5}} (count 2 = d-1 = k); witnesses (1/2,7/3) and (-3,-4) hit nothing to n = {H10_N}"
    ))
}

// ---------------------------------------------------------------- 5

fn random_system(rng: &mut ChaCha8Rng) -> (Vec<Vec<i64>>, Vec<i64>) {
    let d = rng.gen_range(1..=3);
    let m = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let x = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
    (m, x)
}

fn to_lds(m: &[Vec<i64>], x: &[i64]) -> Lds {
    let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    Lds::from_i64(&rows, x)
}

fn to_q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&a| Rational::from_integer(a.into())).collect()
}

/// Every eigenvalue has modulus above 3/2, checked with the kernel disk count.
fn geometric(lds: &Lds) -> bool {
    let p = lds.matrix().char_poly().unwrap();
    count_roots_in_disk(&p, &Rational::new(3.into(), 2.into())).unwrap() == 0
}

fn own_orbit(m: &[Vec<i64>], x: &[i64], n: usize) -> Vec<Vec<Rational>> {
    let m: Vec<Vec<Rational>> = m.iter().map(|r| to_q(r)).collect();
    let mut out = vec![to_q(x)];
    for _ in 0..n {
        let next = mat_vec(&m, out.last().unwrap());
        out.push(next);
    }
    out
}

fn distance(y: &[Rational]) -> MultiPoly {
    let d = y.len();
    (0..d).fold(MultiPoly::zero(d), |acc, i| {
        let diff = MultiPoly::var(d, i).sub(&MultiPoly::constant(d, y[i].clone()));
        acc.add(&diff.mul(&diff))
    })
}

#[derive(Default)]
struct ReachTally {
    hits: usize,
    shifted_unreachable: usize,
    shifted_hits: usize,
    shifted_open: usize,
    geometric: usize,
    geometric_certified: usize,
}

fn reach_case(m: &[Vec<i64>], x: &[i64], k: usize, budget: &Budget, t: &mut ReachTally) -> Result<(), String> {
    let lds = to_lds(m, x);
    let orbit = own_orbit(m, x, 1000);
    let y = orbit[k].clone();
    match reach_point(&lds, &y, budget).map_err(|e| format!("{m:?} {x:?}: {e}"))? {
        ReachVerdict::Hit { n } => {
            ensure(n as usize <= k && orbit[n as usize] == y, || format!("{m:?} {x:?} k={k}: bogus hit {n}"))?;
            t.hits += 1;
        }
        other => return Err(format!("{m:?} {x:?} k={k}: expected a hit, got {other:?}")),
    }
    let mut shifted = y.clone();
    shifted[0] += Rational::one();
    let on_orbit = orbit.iter().position(|p| *p == shifted);
    let is_geometric = geometric(&lds);
    t.geometric += usize::from(is_geometric);
    match reach_point(&lds, &shifted, budget).map_err(|e| e.to_string())? {
        ReachVerdict::Hit { n } => {
            ensure(orbit.get(n as usize) == Some(&shifted) || lds.point(n) == shifted, || {
                format!("{m:?} {x:?} k={k}: false hit {n} on shifted target")
            })?;
            t.shifted_hits += 1;
            t.geometric_certified += usize::from(is_geometric);
        }
        ReachVerdict::Unreachable { certificate } => {
            ensure(on_orbit.is_none(), || format!("{m:?} {x:?} k={k}: unreachable but hit by brute force"))?;
            let s = polynomial_sequence(&lds, &distance(&shifted))?;
            check_decomposition(&s, &certificate).map_err(|e| format!("{m:?} {x:?}: certificate rejected: {e}"))?;
            t.shifted_unreachable += 1;
            t.geometric_certified += usize::from(is_geometric);
        }
        ReachVerdict::Inconclusive { .. } => {
            ensure(!is_geometric, || format!("{m:?} {x:?} k={k}: geometric system left inconclusive"))?;
            t.shifted_open += 1;
        }
    }
    Ok(())
}

fn point_reachability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let budget = Budget::default();
    let mut t = ReachTally::default();
    for _ in 0..REACH_CASES {
        let (m, x) = random_system(&mut rng);
        let k = rng.gen_range(0..=10);
        reach_case(&m, &x, k, &budget, &mut t)?;
    }
    let random_geometric = t.geometric;
    let mut extra = 0;
    while t.geometric < 15 {
        let (m, x) = random_system(&mut rng);
        if x.iter().all(|&c| c == 0) || !geometric(&to_lds(&m, &x)) {
            continue;
        }
        let k = rng.gen_range(0..=10);
        reach_case(&m, &x, k, &budget, &mut t)?;
        extra += 1;
    }
    ensure(t.geometric_certified == t.geometric, || "geometric subfamily not fully decided".into())?;
    Ok(format!(
        "{} systems: {} exact hits; shifted targets: {} certified unreachable, {} genuine hits, {} inconclusive, \
         0 false hits; geometric subfamily {}/{} decided ({random_geometric} among the first {REACH_CASES}, {extra} drawn extra)",
        REACH_CASES + extra,
        t.hits,
        t.shifted_unreachable,
        t.shifted_hits,
        t.shifted_open,
        t.geometric_certified,
        t.geometric
    ))
}

// ---------------------------------------------------------------- 6

fn letter(word: &Value, n: usize) -> Vec<u64> {
    let stem = word["stem"].as_array().unwrap();
    let cycle = word["cycle"].as_array().unwrap();
    let l = if n < stem.len() { &stem[n] } else { &cycle[(n - stem.len()) % cycle.len()] };
    serde_json::from_value(l.clone()).unwrap()
}

fn model_checking() -> Outcome {
    let mut ws = Workspace::new();
    let lds = json!({"matrix": [["0", "-1"], ["1", "0"]], "start": ["1", "0"]});
    let preds = json!([{"name": "P", "atoms": ["z1"], "formula": {"atom": 0}}]);
    let mut verdicts = Vec::new();
    for (phi, want) in [("G F P", "holds"), ("F G P", "fails"), ("G F !P", "holds"), ("F G !P", "fails")] {
        let inst = ws.write(&json!({"lds": lds, "predicates": preds, "formula": phi}));
        let (env, code) = ws.cli(&["mc", &inst]);
        ensure(code == 0, || format!("{phi}: exit {code}: {}", env["error"]))?;
        ensure(env["payload"]["verdict"] == json!(want), || format!("{phi}: {}", env["payload"]["verdict"]))?;
        let (ver, vcode) = ws.verify(&env, &inst);
        ensure(vcode == 0, || format!("{phi}: evidence rejected: {}", ver["error"]))?;

        let word = &env["payload"]["word"];
        let orbit = own_orbit(&[vec![0, -1], vec![1, 0]], &[1, 0], WORD_LETTERS);
        for (n, z) in orbit.iter().enumerate().take(WORD_LETTERS) {
            let direct: Vec<u64> = if z[0].is_zero() { vec![0] } else { vec![] };
            ensure(letter(word, n) == direct, || format!("{phi}: letter {n} differs from direct evaluation"))?;
        }
        verdicts.push(format!("{phi} {want}"));
    }
    Ok(format!("{}; first {WORD_LETTERS} letters match exact evaluation; evidence replayed", verdicts.join(", ")))
}

// ---------------------------------------------------------------- 7

/// `(name, automaton, prefix independent)` classified by hand.
fn muller_suite() -> Vec<(&'static str, Value, bool)> {
    let ab = json!(["a", "b"]);
    let last = |table: Value| {
        json!({
            "states": ["qa", "qb"], "initial": "qb", "alphabet": ab,
            "delta": [["qa", "a", "qa"], ["qa", "b", "qb"], ["qb", "a", "qa"], ["qb", "b", "qb"]],
            "table": table
        })
    };
    let count3 = |table: Value| {
        json!({
            "states": ["c0", "c1", "c2"], "initial": "c0", "alphabet": ab,
            "delta": [["c0", "a", "c1"], ["c1", "a", "c2"], ["c2", "a", "c0"],
                      ["c0", "b", "c0"], ["c1", "b", "c1"], ["c2", "b", "c2"]],
            "table": table
        })
    };
    vec![
        ("infinitely many a", last(json!([["qa"], ["qa", "qb"]])), true),
        ("finitely many a", last(json!([["qb"]])), true),
        ("infinitely many a and b", last(json!([["qa", "qb"]])), true),
        ("every word", last(json!([["qa"], ["qb"], ["qa", "qb"]])), true),
        ("infinitely many a, counted mod 3", count3(json!([["c0", "c1", "c2"]])), true),
        (
            "first letter a",
            json!({
                "states": ["s", "yes", "no"], "initial": "s", "alphabet": ab,
                "delta": [["s", "a", "yes"], ["s", "b", "no"], ["yes", "a", "yes"], ["yes", "b", "yes"],
                          ["no", "a", "no"], ["no", "b", "no"]],
                "table": [["yes"]]
            }),
            false,
        ),
        (
            "second letter a",
            json!({
                "states": ["s0", "s1", "yes", "no"], "initial": "s0", "alphabet": ab,
                "delta": [["s0", "a", "s1"], ["s0", "b", "s1"], ["s1", "a", "yes"], ["s1", "b", "no"],
                          ["yes", "a", "yes"], ["yes", "b", "yes"], ["no", "a", "no"], ["no", "b", "no"]],
                "table": [["yes"]]
            }),
            false,
        ),
        (
            "always a",
            json!({
                "states": ["ok", "dead"], "initial": "ok", "alphabet": ab,
                "delta": [["ok", "a", "ok"], ["ok", "b", "dead"], ["dead", "a", "dead"], ["dead", "b", "dead"]],
                "table": [["ok"]]
            }),
            false,
        ),
        ("finitely many a, count divisible by 3", count3(json!([["c0"]])), false),
    ]
}

fn random_letters(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> Vec<String> {
    (0..rng.gen_range(lo..=hi)).map(|_| if rng.gen_bool(0.5) { "a" } else { "b" }.to_string()).collect()
}

fn prefix_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut ws = Workspace::new();
    let suite = muller_suite();
    let mut sampled = 0;
    for (name, automaton, want) in &suite {
        let inst = ws.write(&json!({"automaton": automaton}));
        let (env, code) = ws.cli(&["prefix-independent", &inst]);
        ensure(code == 0, || format!("{name}: exit {code}: {}", env["error"]))?;
        let got = env["payload"]["independent"] == json!(true);
        ensure(got == *want, || format!("{name}: reported {got}, classified {want}"))?;
        let (ver, vcode) = ws.verify(&env, &inst);
        let expect = if *want { 2 } else { 0 };
        ensure(vcode == expect, || format!("{name}: verify exit {vcode}: {}", ver["error"]))?;
        if !want {
            continue;
        }
        let a: MullerAutomaton = serde_json::from_value(automaton.clone()).unwrap();
        let alphabet = vec!["a".to_string(), "b".to_string()];
        for _ in 0..LASSO_SAMPLES {
            let w = LassoWord::new(alphabet.clone(), random_letters(&mut rng, 0, 4), random_letters(&mut rng, 1, 4))
                .unwrap();
            let mut stem = random_letters(&mut rng, 1, 5);
            stem.extend(w.stem.iter().cloned());
            let uw = LassoWord::new(alphabet.clone(), stem, w.cycle.clone()).unwrap();
            let (x, y) = (muller_accepts_lasso(&a, &w).unwrap(), muller_accepts_lasso(&a, &uw).unwrap());
            ensure(x == y, || format!("{name}: prefix changes acceptance of {w:?}"))?;
            sampled += 1;
        }
    }
    let positives = suite.iter().filter(|s| s.2).count();
    Ok(format!(
        "{} automata classified correctly ({positives} independent); counterexamples replayed; \
         {sampled} prefix insertions preserve acceptance",
        suite.len()
    ))
}

// ---------------------------------------------------------------- 8

fn unit_box_instance(diag: [&str; 2], target: Value) -> Value {
    json!({
        "lds": {"matrix": [[diag[0], "0"], ["0", diag[1]]], "start": ["1", "0"]},
        "polyhedra": {
            "invariant": {"A": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"]], "b": ["1", "1", "1", "1"]},
            "target": target
        }
    })
}

fn far_target() -> Value {
    json!({"A": [["-1", "0"]], "b": ["-2"]})
}

fn invariant_checker() -> Outcome {
    let mut ws = Workspace::new();
    let halving = ws.write(&unit_box_instance(["1/2", "1/2"], far_target()));
    let (env, code) = ws.cli(&["invariant", &halving]);
    ensure(code == 0, || format!("halving: exit {code}: {}", env["error"]))?;
    ensure(env["payload"]["result"] == json!("certified"), || format!("halving: {}", env["payload"]["result"]))?;
    let cert = &env["certificates"][0];
    ensure(cert["separation"].is_array() && cert["stability"].is_array(), || "halving: no Farkas multipliers".into())?;
    let (ver, vcode) = ws.verify(&env, &halving);
    ensure(vcode == 0, || format!("halving: certificate rejected: {}", ver["error"]))?;

    let doubling = ws.write(&unit_box_instance(["2", "1"], far_target()));
    let (env, code) = ws.cli(&["invariant", &doubling]);
    ensure(code == 0, || format!("doubling: exit {code}: {}", env["error"]))?;
    let p = &env["payload"];
    ensure(p["result"] == json!("failed") && p["reason"] == json!("stability"), || {
        format!("doubling: {} / {}", p["result"], p["reason"])
    })?;
    let rows = p["report"]["rows"].as_array().unwrap();
    let bad = rows.iter().find(|r| r["holds"] == json!(false)).ok_or("doubling: no violating row")?;
    let outcome = &bad["outcome"];
    ensure(bad["row"] == json!(0) && outcome["status"] == json!("optimal") && outcome["value"] == json!("2"), || {
        format!("doubling: violating row {bad}")
    })?;
    ensure(outcome["point"][0] == json!("1"), || format!("doubling: optimum at {}", outcome["point"]))?;
    let (ver, vcode) = ws.verify(&env, &doubling);
    ensure(vcode == 0, || format!("doubling: violation not confirmed: {}", ver["error"]))?;
    Ok(format!(
        "halving map certified, Farkas multipliers replayed; doubling map fails at stability, row 0 optimum 2 > 1 at {}",
        outcome["point"]
    ))
}

// ---------------------------------------------------------------- 9

fn certificate_independence() -> Outcome {
    let mut ws = Workspace::new();
    let powers = ws.write(&json!({"lrs": {"coeffs": ["2"], "init": ["1"]}}));
    let fib = ws.write(&json!({"lrs": {"coeffs": ["1", "1"], "init": ["0", "1"]}}));
    let quadratic = ws.write(&json!({"lrs": {"coeffs": ["3", "-3", "1"], "init": ["10", "4", "0"]}}));
    let halving = ws.write(&unit_box_instance(["1/2", "1/2"], far_target()));

    type Mutation = (&'static str, fn(&mut Value));
    let cases: Vec<(&str, &String, &str, &str, Vec<Mutation>)> = vec![
        ("modular", &powers, "zeros", "modular", vec![
            ("modulus 2", |c| c["modulus"] = json!(2)),
            ("state period 3", |c| c["state_period"] = json!(3)),
            ("spurious zero residual", |c| c["zero_residual_positions"] = json!([0])),
        ]),
        ("dominant-root", &fib, "zeros", "dominant-root", vec![
            ("cutoff 2", |c| c["cutoff"] = json!(2)),
            ("coefficient bound 1", |c| c["coeff_lower"] = json!("1")),
            ("remainder constant 1", |c| c["remainder_constant"] = json!("1")),
            ("empty root interval", |c| c["root_lo"] = c["root_hi"].clone()),
            ("outer radius 2", |c| c["outer_radius"] = json!("2")),
            ("inner radius 3/2", |c| c["inner_radius"] = json!("3/2")),
        ]),
        ("polynomial", &quadratic, "zeros", "polynomial", vec![
            ("cutoff 4", |c| c["cutoff"] = json!(4)),
            ("leading coefficient 2", |c| c["coefficients"][2] = json!("2")),
        ]),
        ("Farkas", &halving, "invariant", "", vec![
            ("separation multiplier 2", |c| c["separation"][4] = json!("2")),
            ("zero separation", |c| c["separation"] = json!(["0", "0", "0", "0", "0"])),
            ("stability multiplier 1/4", |c| c["stability"][0][0] = json!("1/4")),
            ("negative stability multiplier", |c| c["stability"][1][1] = json!("-1/2")),
            ("invariant bound 2", |c| c["invariant"]["b"][0] = json!("2")),
        ]),
    ];

    let (mut rejected, mut total) = (0, 0);
    for (kind, inst, cmd, variant, mutations) in &cases {
        let (env, code) = ws.cli(&[cmd, inst]);
        ensure(code == 0, || format!("{kind}: exit {code}: {}", env["error"]))?;
        if !variant.is_empty() {
            ensure(env["certificates"][0]["variant"] == json!(variant), || {
                format!("{kind}: engine emitted {}", env["certificates"][0]["variant"])
            })?;
        }
        let (_, vcode) = ws.verify(&env, inst);
        ensure(vcode == 0, || format!("{kind}: unmutated certificate rejected"))?;
        for (name, mutate) in mutations {
            let mut bad = env.clone();
            mutate(&mut bad["certificates"][0]);
            ensure(bad != env, || format!("{kind}/{name}: mutation is a no-op"))?;
            let (ver, vcode) = ws.verify(&bad, inst);
            total += 1;
            ensure(vcode == 1, || format!("{kind}/{name}: verify exit {vcode} {}", ver["payload"]))?;
            rejected += 1;
        }
    }
    Ok(format!("{rejected}/{total} mutations rejected (modular 3, dominant-root 6, polynomial 2, Farkas 5); 4 originals accepted"))
}

// ----------------------------------------------------------------

fn main() {
    let criteria: Vec<(u8, &str, fn() -> Outcome)> = vec![
        (1, "Fibonacci zero set", fibonacci),
        (2, "random LRS against brute force", random_lrs_structure),
        (3, "ultimate-positivity identity", positivity_identity),
        (4, "Hilbert's tenth problem reduction", h10_reduction),
        (5, "point reachability", point_reachability),
        (6, "model checking on the rotation", model_checking),
        (7, "Muller prefix independence", prefix_independence),
        (8, "invariant checker", invariant_checker),
        (9, "certificate independence", certificate_independence),
    ];
    let handles: Vec<_> = criteria
        .into_iter()
        .map(|(id, name, f)| (id, name, thread::spawn(f)))
        .collect();
    let mut failed = 0;
    for (id, name, h) in handles {
        let outcome = h.join().unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {id} PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
