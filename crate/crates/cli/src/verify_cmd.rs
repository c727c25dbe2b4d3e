use lds_core::invariants::{FailureReason, InvariantReport, LpOutcome, Unreachability};
use lds_core::kernel::{MultiPoly, Rational};
use lds_core::logic::{ltl_eval_lasso, muller_accepts_lasso, Equivalence, ModelCheckReport, PrefixIndependence, Verdict};
use lds_core::orbit::{AtomEvidence, LassoWord, Lds, Letter, ReachVerdict};
use lds_core::reductions::PseudoTrajectory;
use lds_core::verify::{check_decomposition, check_invariant_certificate, polynomial_sequence};
use lds_core::zeroset::ZeroSetDecomposition;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::envelope::ResultEnvelope;
use crate::instance::InstanceFile;

/// Result of replaying one envelope.
#[derive(Debug, PartialEq, Eq)]
pub enum Replay {
    Accepted,
    Rejected(String),
    /// The envelope makes no claim that carries a certificate.
    NothingToCheck(String),
}

type Check<T> = Result<T, String>;

fn restore<T: DeserializeOwned>(env: &ResultEnvelope, key: Option<(&str, bool)>) -> Check<T> {
    let mut payload = env.payload.clone();
    if let Some((key, list)) = key {
        let obj = payload.as_object_mut().ok_or("payload is not an object")?;
        let v = if list {
            Value::Array(env.certificates.clone())
        } else {
            env.certificates.first().cloned().unwrap_or(Value::Null)
        };
        if !v.is_null() {
            obj.insert(key.into(), v);
        }
    }
    serde_json::from_value(payload).map_err(|e| format!("malformed payload: {e}"))
}

fn need<'a, T>(section: &'a Option<T>, name: &str) -> Check<&'a T> {
    InstanceFile::require(section, name)
}

pub fn replay(env: &ResultEnvelope, inst: &InstanceFile) -> Replay {
    let result = match env.command.name.as_str() {
        "zeros" => zeros(env, inst),
        "hyperplane" => hyperplane(env, inst),
        "reach" => reach(env, inst),
        "mc" => mc(env, inst),
        "invariant" => invariant(env, inst),
        "prefix-independent" => prefix_independent(env, inst),
        "equivalent" => equivalent(env, inst),
        "pseudo" => pseudo(env, inst),
        other => return Replay::NothingToCheck(format!("command {other} emits no certificate")),
    };
    match result {
        Ok(None) => Replay::Accepted,
        Ok(Some(reason)) => Replay::NothingToCheck(reason),
        Err(e) => Replay::Rejected(e),
    }
}

type Step = Check<Option<String>>;

fn zeros(env: &ResultEnvelope, inst: &InstanceFile) -> Step {
    let s = need(&inst.lrs, "lrs")?;
    let dec: ZeroSetDecomposition = restore(env, Some(("certificates", true)))?;
    check_decomposition(s, &dec)?;
    Ok(None)
}

fn hyperplane(env: &ResultEnvelope, inst: &InstanceFile) -> Step {
    let lds = need(&inst.lds, "lds")?;
    let h = need(&inst.hyperplane, "hyperplane")?;
    if h.normal.len() != lds.dim() || h.normal.iter().all(Zero::is_zero) {
        return Err("hyperplane does not match the system".into());
    }
    let q = MultiPoly::affine(&h.normal, &h.offset);
    let s = polynomial_sequence(lds, &q)?;
    let dec: ZeroSetDecomposition = restore(env, Some(("certificates", true)))?;
    check_decomposition(&s, &dec)?;
    Ok(None)
}

/// `|z - y|^2`.
fn distance(y: &[Rational]) -> MultiPoly {
    let d = y.len();
    (0..d).fold(MultiPoly::zero(d), |acc, i| {
        let diff = MultiPoly::var(d, i).sub(&MultiPoly::constant(d, y[i].clone()));
        acc.add(&diff.mul(&diff))
    })
}

fn reach(env: &ResultEnvelope, inst: &InstanceFile) -> Step {
    let lds = need(&inst.lds, "lds")?;
    let y = need(&inst.target, "target")?;
    if y.len() != lds.dim() {
        return Err("target does not match the system".into());
    }
    match restore::<ReachVerdict>(env, Some(("certificate", false)))? {
        ReachVerdict::Hit { n } => {
            if lds.point(n) != *y {
                return Err(format!("orbit point {n} is not the target"));
            }
            Ok(None)
        }
        ReachVerdict::Unreachable { certificate } => {
            if !certificate.is_complete() || certificate.first_zero().is_some() {
                return Err("certificate does not claim an empty zero set".into());
            }
            check_decomposition(&polynomial_sequence(lds, &distance(y))?, &certificate)?;
            Ok(None)
        }
        ReachVerdict::Inconclusive { .. } => Ok(Some("inconclusive reachability has no certificate".into())),
    }
}

fn eventual_period(dec: &ZeroSetDecomposition) -> (u64, u64) {
    let start = dec
        .exceptional
        .iter()
        .map(|n| n + 1)
        .chain(dec.progressions.iter().map(|p| p.a))
        .max()
        .unwrap_or(0);
    (start, dec.progressions.iter().fold(1, |l, p| l.lcm(&p.b)))
}

fn mc(env: &ResultEnvelope, inst: &InstanceFile) -> Step {
    let lds = need(&inst.lds, "lds")?;
    let phi = need(&inst.formula, "formula")?;
    let report: ModelCheckReport = restore(env, Some(("evidence", true)))?;
    if let Verdict::Inconclusive { .. } = report.verdict {
        return Ok(Some("inconclusive model-checking verdict has no certificate".into()));
    }
    let word: LassoWord<Letter> = report.word.ok_or("decided verdict without a word")?;
    let names: Vec<String> = inst.predicates.iter().map(|p| p.name.clone()).collect();
    if word.alphabet != names {
        return Err("word alphabet does not list the instance predicates".into());
    }
    let mut atoms: Vec<Vec<&ZeroSetDecomposition>> = Vec::new();
    let mut horizon = (word.stem.len() as u64, word.cycle.len() as u64);
    let mut evidence = report.evidence.iter();
    for p in &inst.predicates {
        let mut per = Vec::new();
        for (j, q) in p.atoms.iter().enumerate() {
            let e: &AtomEvidence = evidence.next().ok_or("evidence list is too short")?;
            if e.predicate != p.name || e.atom != j {
                return Err(format!("evidence for {}[{}] is out of order", p.name, j));
            }
            if q.nvars() > lds.dim() {
                return Err(format!("atom {j} of {} has too many variables", p.name));
            }
            let q = q.clone().with_nvars(lds.dim()).map_err(|e| e.to_string())?;
            let s = polynomial_sequence(lds, &q)?;
            if !e.decomposition.is_complete() {
                return Err("evidence is not a complete zero set".into());
            }
            check_decomposition(&s, &e.decomposition)
                .map_err(|r| format!("{}[{}]: {r}", p.name, j))?;
            let (start, period) = eventual_period(&e.decomposition);
            horizon = (horizon.0.max(start), horizon.1.lcm(&period));
            per.push(&e.decomposition);
        }
        atoms.push(per);
    }
    if evidence.next().is_some() {
        return Err("evidence list is too long".into());
    }
    let span = horizon.0 + horizon.1;
    if span > 1_000_000 {
        return Err("word period too long to replay".into());
    }
    for n in 0..span {
        let letter = word.letter(n as usize);
        for (i, (p, decs)) in inst.predicates.iter().zip(&atoms).enumerate() {
            let holds = p.formula.eval(&mut |j| decs[j].contains(n));
            if holds != letter.contains(&i) {
                return Err(format!("letter {n} disagrees with the zero sets on {}", p.name));
            }
        }
    }
    let truth = ltl_eval_lasso(phi, &word).map_err(|e| e.to_string())?;
    let claimed = report.verdict == Verdict::Holds;
    if truth != claimed {
        return Err("verdict does not match the word".into());
    }
    Ok(None)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn invariant(env: &ResultEnvelope, inst: &InstanceFile) -> Step {
    let lds: &Lds = need(&inst.lds, "lds")?;
    let p = need(&inst.polyhedra, "polyhedra")?;
    let inv = &p.invariant;
    if inv.dim() != lds.dim() {
        return Err("invariant does not match the system".into());
    }
    let Some(target) = &p.target else {
        let _: InvariantReport = restore(env, None)?;
        return Ok(Some("an invariant report without a target carries no certificate".into()));
    };
    match restore::<Unreachability>(env, Some(("certificate", false)))? {
        Unreachability::Certified { certificate, .. } => {
            if certificate.invariant != *inv || certificate.target != *target {
                return Err("certificate is for different polyhedra".into());
            }
            check_invariant_certificate(lds, &certificate)?;
            Ok(None)
        }
        Unreachability::Failed {
            reason,
            report,
            common_point,
        } => match reason {
            FailureReason::ContainsStart => {
                if inv.contains(lds.start()).map_err(|e| e.to_string())? {
                    return Err("start lies in the invariant".into());
                }
                Ok(None)
            }
            FailureReason::Intersection => {
                let z = common_point.ok_or("intersection claimed without a point")?;
                let inside = |q: &lds_core::invariants::Polyhedron| q.contains(&z).map_err(|e| e.to_string());
                if !(inside(inv)? && inside(target)?) {
                    return Err("common point misses the invariant or the target".into());
                }
                Ok(None)
            }
            FailureReason::Stability => {
                let row = report
                    .rows
                    .iter()
                    .find(|r| !r.holds)
                    .ok_or("stability failure without a violating row")?;
                let a_i = inv.a().row(row.row);
                let m = lds.matrix();
                let image = |v: &[Rational]| m.mul_vec(v).map_err(|e| e.to_string());
                match &row.outcome {
                    LpOutcome::Optimal { point, .. } => {
                        if !inv.contains(point).map_err(|e| e.to_string())? {
                            return Err("violating point lies outside the invariant".into());
                        }
                        if dot(a_i, &image(point)?) <= inv.b()[row.row] {
                            return Err("claimed violation does not exceed the bound".into());
                        }
                    }
                    LpOutcome::Unbounded { point, ray } => {
                        if !inv.contains(point).map_err(|e| e.to_string())? {
                            return Err("ray base lies outside the invariant".into());
                        }
                        let ar = inv.a().mul_vec(ray).map_err(|e| e.to_string())?;
                        if ar.iter().any(Signed::is_positive) || !dot(a_i, &image(ray)?).is_positive() {
                            return Err("ray does not witness unboundedness".into());
                        }
                    }
                    LpOutcome::Infeasible { .. } => {
                        return Err("an infeasible row cannot violate stability".into());
                    }
                }
                Ok(None)
            }
        },
    }
}

fn symbol_check(a: &lds_core::logic::MullerAutomaton, b: &lds_core::logic::MullerAutomaton, w: &LassoWord<String>) -> Check<()> {
    let x = muller_accepts_lasso(a, w).map_err(|e| e.to_string())?;
    let y = muller_accepts_lasso(b, w).map_err(|e| e.to_string())?;
    if x == y {
        return Err("counterexample is accepted by both or by neither".into());
    }
    Ok(())
}

fn prefix_independent(env: &ResultEnvelope, inst: &InstanceFile) -> Step {
    let a = need(&inst.automaton, "automaton")?;
    let r: PrefixIndependence = restore(env, None)?;
    if r.independent {
        return Ok(Some("prefix independence is not certified by a witness".into()));
    }
    let name = r.state.ok_or("missing state")?;
    let q = a
        .states()
        .iter()
        .position(|s| *s == name)
        .ok_or("unknown state")?;
    if !a.reachable().contains(&q) {
        return Err(format!("state {name} is not reachable"));
    }
    symbol_check(&a.with_initial(q), a, &r.counterexample.ok_or("missing counterexample")?)?;
    Ok(None)
}

fn equivalent(env: &ResultEnvelope, inst: &InstanceFile) -> Step {
    let a = need(&inst.automaton, "automaton")?;
    let b = need(&inst.compare, "compare")?;
    let r: Equivalence = restore(env, None)?;
    if r.equivalent {
        return Ok(Some("equivalence is not certified by a witness".into()));
    }
    symbol_check(a, b, &r.counterexample.ok_or("missing counterexample")?)?;
    Ok(None)
}

fn pseudo(env: &ResultEnvelope, inst: &InstanceFile) -> Step {
    let lds = need(&inst.lds, "lds")?;
    let p = need(&inst.pseudo, "pseudo")?;
    let t: PseudoTrajectory = restore(env, None)?;
    if t.epsilon != p.epsilon {
        return Err("trajectory uses a different epsilon".into());
    }
    if !t.is_valid(lds, &p.epsilon) {
        return Err("trajectory violates the perturbation bound or the dynamics".into());
    }
    Ok(None)
}
