use lds_core::invariants::{is_inductive, prove_unreachable};
use lds_core::logic::{model_check, muller_equivalent, prefix_independent, Verdict};
use lds_core::lrs::is_simple;
use lds_core::orbit::{hit_hyperplane, reach_point, ReachVerdict};
use lds_core::reductions::{
    build_positivity, build_h10, pseudo_orbit, verify_positivity_identity,
};
use lds_core::zeroset::skolem;
use lds_core::Budget;
use serde::Serialize;
use serde_json::{json, Value};

use crate::envelope::{Failure, Status};
use crate::instance::{InstanceFile, Reduction};

/// What an adapter hands back for wrapping.
pub struct Outcome {
    pub status: Status,
    pub payload: Value,
    pub certificates: Vec<Value>,
    pub metadata: Value,
}

impl Outcome {
    fn decided(payload: Value) -> Self {
        Outcome {
            status: Status::Decided,
            payload,
            certificates: Vec::new(),
            metadata: Value::Null,
        }
    }
}

pub type CmdResult = Result<Outcome, Failure>;

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("library results serialize")
}

/// Removes `key` from a JSON object, returning its entries as a list.
fn take(payload: &mut Value, key: &str) -> Vec<Value> {
    match payload.as_object_mut().and_then(|o| o.remove(key)) {
        Some(Value::Array(items)) => items,
        Some(Value::Null) | None => Vec::new(),
        Some(other) => vec![other],
    }
}

fn missing(module: &str, msg: String) -> Failure {
    Failure::new(module, "schema", msg)
}

fn status_if(complete: bool) -> Status {
    if complete {
        Status::Decided
    } else {
        Status::Inconclusive
    }
}

pub fn zeros(inst: &InstanceFile, budget: &Budget) -> CmdResult {
    let m = "zeroset";
    let lrs = InstanceFile::require(&inst.lrs, "lrs").map_err(|e| missing(m, e))?;
    let dec = skolem(lrs, budget).map_err(|e| Failure::from_core(m, e))?;
    let mut payload = value(&dec);
    let certificates = take(&mut payload, "certificates");
    Ok(Outcome {
        status: status_if(dec.is_complete()),
        payload,
        certificates,
        metadata: json!({ "order": lrs.order(), "is_simple": is_simple(lrs) }),
    })
}

pub fn reach(inst: &InstanceFile, budget: &Budget) -> CmdResult {
    let m = "orbit";
    let lds = InstanceFile::require(&inst.lds, "lds").map_err(|e| missing(m, e))?;
    let y = InstanceFile::require(&inst.target, "target").map_err(|e| missing(m, e))?;
    let verdict = reach_point(lds, y, budget).map_err(|e| Failure::from_core(m, e))?;
    let mut payload = value(&verdict);
    let certificates = take(&mut payload, "certificate");
    Ok(Outcome {
        status: status_if(!matches!(verdict, ReachVerdict::Inconclusive { .. })),
        payload,
        certificates,
        metadata: Value::Null,
    })
}

pub fn hyperplane(inst: &InstanceFile, budget: &Budget) -> CmdResult {
    let m = "orbit";
    let lds = InstanceFile::require(&inst.lds, "lds").map_err(|e| missing(m, e))?;
    let h = InstanceFile::require(&inst.hyperplane, "hyperplane").map_err(|e| missing(m, e))?;
    let dec = hit_hyperplane(lds, &h.normal, &h.offset, budget).map_err(|e| Failure::from_core(m, e))?;
    let mut payload = value(&dec);
    let certificates = take(&mut payload, "certificates");
    Ok(Outcome {
        status: status_if(dec.is_complete()),
        payload,
        certificates,
        metadata: Value::Null,
    })
}

pub fn mc(inst: &InstanceFile, budget: &Budget) -> CmdResult {
    let m = "logic";
    let lds = InstanceFile::require(&inst.lds, "lds").map_err(|e| missing(m, e))?;
    let phi = InstanceFile::require(&inst.formula, "formula").map_err(|e| missing(m, e))?;
    let report = model_check(lds, &inst.predicates, phi, budget).map_err(|e| Failure::from_core(m, e))?;
    let mut payload = value(&report);
    let certificates = take(&mut payload, "evidence");
    Ok(Outcome {
        status: status_if(!matches!(report.verdict, Verdict::Inconclusive { .. })),
        payload,
        certificates,
        metadata: Value::Null,
    })
}

pub fn prefix_independence(inst: &InstanceFile, budget: &Budget) -> CmdResult {
    let m = "logic";
    let a = InstanceFile::require(&inst.automaton, "automaton").map_err(|e| missing(m, e))?;
    let r = prefix_independent(a, budget.product_states).map_err(|e| Failure::from_core(m, e))?;
    Ok(Outcome::decided(value(&r)))
}

pub fn equivalent(inst: &InstanceFile, budget: &Budget) -> CmdResult {
    let m = "logic";
    let a = InstanceFile::require(&inst.automaton, "automaton").map_err(|e| missing(m, e))?;
    let b = InstanceFile::require(&inst.compare, "compare").map_err(|e| missing(m, e))?;
    let r = muller_equivalent(a, b, budget.product_states).map_err(|e| Failure::from_core(m, e))?;
    Ok(Outcome::decided(value(&r)))
}

pub fn invariant(inst: &InstanceFile, budget: &Budget) -> CmdResult {
    let m = "invariants";
    let lds = InstanceFile::require(&inst.lds, "lds").map_err(|e| missing(m, e))?;
    let p = InstanceFile::require(&inst.polyhedra, "polyhedra").map_err(|e| missing(m, e))?;
    match &p.target {
        Some(target) => {
            let r = prove_unreachable(lds, &p.invariant, target, budget).map_err(|e| Failure::from_core(m, e))?;
            let mut payload = value(&r);
            let certificates = take(&mut payload, "certificate");
            Ok(Outcome {
                status: Status::Decided,
                payload,
                certificates,
                metadata: Value::Null,
            })
        }
        None => {
            let r = is_inductive(lds, &p.invariant, budget).map_err(|e| Failure::from_core(m, e))?;
            Ok(Outcome::decided(value(&r)))
        }
    }
}

pub fn reduce(inst: &InstanceFile, bound: Option<u64>) -> CmdResult {
    let m = "reductions";
    let r = InstanceFile::require(&inst.reduction, "reduction").map_err(|e| missing(m, e))?;
    let payload = match r {
        Reduction::H10 { polynomial, witness } => {
            let bound = bound.unwrap_or(100);
            let h = build_h10(polynomial.clone(), witness).map_err(|e| Failure::from_core(m, e))?;
            let hits = h.hit_indices(bound);
            json!({
                "kind": "h10",
                "instance": value(&h),
                "bound": bound,
                "hits": hits,
                "count": hits.len(),
            })
        }
        Reduction::Positivity { lambda, r } => {
            let bound = bound.unwrap_or(200);
            let a = build_positivity(lambda.clone(), r.clone()).map_err(|e| Failure::from_core(m, e))?;
            json!({
                "kind": "positivity",
                "instance": value(&a),
                "target": value(&a.target_predicate()),
                "bound": bound,
                "identity_holds": verify_positivity_identity(&a, bound),
            })
        }
    };
    Ok(Outcome::decided(payload))
}

pub fn pseudo(inst: &InstanceFile, bound: Option<u64>) -> CmdResult {
    let m = "reductions";
    let lds = InstanceFile::require(&inst.lds, "lds").map_err(|e| missing(m, e))?;
    let p = InstanceFile::require(&inst.pseudo, "pseudo").map_err(|e| missing(m, e))?;
    let steps = bound.map_or(p.steps, |b| b as usize);
    let t = pseudo_orbit(lds, &p.epsilon, steps, &p.steering).map_err(|e| Failure::from_core(m, e))?;
    Ok(Outcome::decided(value(&t)))
}
