use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::lrs::{integer_normalization, Lrs};

/// The sequence reduced modulo `modulus` has state vectors
/// `(w_j, ..., w_{j+d-1})` that repeat with preperiod `preperiod` and period
/// `period`, and `w_j` is nonzero modulo `modulus` at every position
/// `j >= preperiod` of the class. `zero_residual_positions` lists the class
/// positions below the preperiod where `w_j` vanishes modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularCertificate {
    pub modulus: u64,
    pub preperiod: u64,
    pub state_period: u64,
    pub zero_residual_positions: Vec<u64>,
}

fn reduce(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue below modulus")
}

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Moduli in ladder order: primes, then prime powers, then products of two
/// distinct primes, all bounded by `max`.
fn modulus_ladder(min: u64, max: u64) -> Vec<u64> {
    let primes = primes_up_to(max);
    let mut out: Vec<u64> = primes.iter().copied().filter(|&p| p >= min).collect();
    let mut powers = Vec::new();
    for &p in &primes {
        let mut q = p * p;
        while q <= max {
            if q >= min {
                powers.push(q);
            }
            q *= p;
        }
    }
    powers.sort_unstable();
    out.extend(powers);
    let small: Vec<u64> = primes
        .iter()
        .copied()
        .take_while(|&p| p * 2 <= max)
        .collect();
    let mut products = Vec::new();
    for (i, &p) in small.iter().enumerate() {
        for &q in &small[i + 1..] {
            if p * q > max {
                break;
            }
            if p * q >= min {
                products.push(p * q);
            }
        }
    }
    products.sort_unstable();
    out.extend(products);
    out
}

/// Tries a single modulus against the class `j = residue (mod class_period)`
/// of the integer recurrence; `steps` is decremented by the work done.
fn try_modulus(
    coeffs: &[BigInt],
    init: &[BigInt],
    m: u64,
    class_period: u64,
    residue: u64,
    known_zero: Option<u64>,
    step_cap: usize,
    steps: &mut usize,
) -> Option<ModularCertificate> {
    let d = coeffs.len();
    let c: Vec<u64> = coeffs.iter().map(|x| reduce(x, m)).collect();
    if known_zero.is_some() && c[d - 1].gcd(&m) == 1 {
        // invertible state map: purely periodic, so the zero recurs
        return None;
    }
    let mut state: Vec<u64> = init.iter().map(|x| reduce(x, m)).collect();
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut history: Vec<u64> = Vec::new();
    let mut j = 0u64;
    let (pre, per) = loop {
        if let Some(&i) = seen.get(&state) {
            break (i, j - i);
        }
        if seen.len() >= step_cap || *steps == 0 {
            return None;
        }
        *steps -= 1;
        seen.insert(state.clone(), j);
        history.push(state[0]);
        let mut next = 0u128;
        for (i, ci) in c.iter().enumerate() {
            next = (next + *ci as u128 * state[d - 1 - i] as u128) % m as u128;
        }
        state.remove(0);
        state.push(next as u64);
        j += 1;
    };
    let span = per.lcm(&class_period);
    for pos in pre..pre + span {
        if pos % class_period != residue % class_period {
            continue;
        }
        let idx = pre + (pos - pre) % per;
        if history[idx as usize] == 0 {
            return None;
        }
    }
    let zero_residual_positions = (0..pre)
        .filter(|&p| p % class_period == residue % class_period && history[p as usize] == 0)
        .collect();
    Some(ModularCertificate {
        modulus: m,
        preperiod: pre,
        state_period: per,
        zero_residual_positions,
    })
}

/// Searches the modulus ladder for a certificate that the positions
/// `j = residue (mod class_period)` of `t` are nonzero beyond a preperiod.
/// `known_zero` is an exact zero of the class, if one is known, used to skip
/// moduli that cannot work. Moduli range over `[min_modulus, budget.max_prime]`.
pub fn certify_nonzero_modular(
    t: &Lrs,
    class_period: u64,
    residue: u64,
    known_zero: Option<u64>,
    min_modulus: u64,
    max_modulus: u64,
    budget: &Budget,
    steps: &mut usize,
) -> Option<ModularCertificate> {
    if t.order() == 0 || t.coeffs().last().is_some_and(Zero::is_zero) {
        return None;
    }
    let (coeffs, init) = integer_normalization(t);
    if init.iter().all(Zero::is_zero) {
        return None;
    }
    let den = t
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    for m in modulus_ladder(min_modulus.max(2), max_modulus) {
        if *steps == 0 {
            return None;
        }
        if !den.gcd(&BigInt::from(m)).is_one() {
            continue;
        }
        if let Some(c) = try_modulus(
            &coeffs,
            &init,
            m,
            class_period,
            residue,
            known_zero,
            budget.steps_per_modulus,
            steps,
        ) {
            return Some(c);
        }
    }
    None
}
