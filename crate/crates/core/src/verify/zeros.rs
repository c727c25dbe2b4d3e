//! Replays zero-set decompositions from the recurrence alone.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::kernel::{
    count_roots_in_disk, round_dyadic, sturm_count, Interval, Matrix, MultiPoly, Polynomial,
    Rational,
};
use crate::lrs::Lrs;
use crate::orbit::Lds;
use crate::zeroset::{
    ClassCertificate, DominantCertificate, ModularCertificate, NonzeroCertificate,
    PolynomialCertificate, Status, ZeroSetDecomposition,
};

/// Largest index the verifier is willing to replay.
pub const REPLAY_LIMIT: u64 = 2_000_000;

type Check<T> = std::result::Result<T, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check<()> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Exact zero pattern of a sequence, extended on demand through an integer
/// rescaling `w_n = E D^n u_n`.
struct Replay {
    coeffs: Vec<BigInt>,
    window: Vec<BigInt>,
    zeros: Vec<bool>,
}

impl Replay {
    fn new(s: &Lrs) -> Self {
        let den = s
            .coeffs()
            .iter()
            .fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        let dq = Rational::from_integer(den);
        let mut coeffs = Vec::new();
        let mut p = Rational::one();
        for c in s.coeffs() {
            p = &p * &dq;
            coeffs.push((c * &p).to_integer());
        }
        let mut scaled = Vec::new();
        let mut p = Rational::one();
        for u in s.init() {
            scaled.push(u * &p);
            p = &p * &dq;
        }
        let e = scaled.iter().fold(BigInt::one(), |a, q| a.lcm(q.denom()));
        let window = scaled
            .iter()
            .map(|q| (q * Rational::from_integer(e.clone())).to_integer())
            .collect();
        Replay {
            coeffs,
            window,
            zeros: Vec::new(),
        }
    }

    fn is_zero(&mut self, n: u64) -> Check<bool> {
        ensure(n <= REPLAY_LIMIT, || {
            format!("index {n} beyond replay limit")
        })?;
        let d = self.coeffs.len();
        while self.zeros.len() as u64 <= n {
            if d == 0 {
                self.zeros.push(true);
                continue;
            }
            let mut next = BigInt::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                next += c * &self.window[d - 1 - i];
            }
            let head = self.window.remove(0);
            self.window.push(next);
            self.zeros.push(head.is_zero());
        }
        Ok(self.zeros[n as usize])
    }
}

/// Exact rational terms `u_0..u_{n-1}`.
fn rational_terms(s: &Lrs, n: u64) -> Vec<Rational> {
    let d = s.order();
    let mut out: Vec<Rational> = Vec::new();
    for i in 0..n as usize {
        let t = if i < d {
            s.init()[i].clone()
        } else {
            let mut acc = Rational::zero();
            for (j, c) in s.coeffs().iter().enumerate() {
                acc += c * &out[i - 1 - j];
            }
            acc
        };
        out.push(t);
    }
    out
}

/// Minimal recurrence `(coefficients, initial terms)` of a sequence of order
/// at most `terms.len() / 2`, via the Hankel matrix.
fn hankel_recurrence(terms: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let n = terms.len() / 2;
    let h = Matrix::from_rows(
        (0..n)
            .map(|i| (0..n).map(|j| terms[i + j].clone()).collect())
            .collect(),
    )
    .expect("square");
    let r = h.rank();
    if r == 0 {
        return (Vec::new(), Vec::new());
    }
    let hr = Matrix::from_rows(
        (0..r)
            .map(|i| (0..r).map(|j| terms[i + j].clone()).collect())
            .collect(),
    )
    .expect("square");
    let rhs: Vec<Rational> = (0..r).map(|i| terms[i + r].clone()).collect();
    match hr.solve(&rhs) {
        Ok(Some(a)) => (
            (1..=r).map(|i| a[r - i].clone()).collect(),
            terms[..r].to_vec(),
        ),
        _ => (Vec::new(), Vec::new()),
    }
}

/// Recurrence of `q(M^n x)`, rebuilt from orbit values: the sequence lies in
/// the span of the `C(d + D, D)` monomials of degree at most `D = deg q`.
pub fn polynomial_sequence(lds: &Lds, q: &MultiPoly) -> Check<Lrs> {
    let d = lds.dim() as u64;
    let deg = q.degree() as u64;
    let mut span = 1u64;
    for i in 1..=deg {
        span = span * (d + i) / i;
    }
    ensure(span <= 4096, || {
        format!("monomial span {span} too large to replay")
    })?;
    let m = lds.matrix();
    let mut z = lds.start().to_vec();
    let mut values = Vec::new();
    for _ in 0..2 * span {
        values.push(q.eval(&z).map_err(|e| e.to_string())?);
        z = (0..z.len())
            .map(|i| m.row(i).iter().zip(&z).map(|(a, x)| a * x).sum())
            .collect();
    }
    let (c, init) = hankel_recurrence(&values);
    Lrs::general(c, init).map_err(|e| e.to_string())
}

struct Context<'a> {
    s: &'a Lrs,
    offset: u64,
    replay: Replay,
}

impl Context<'_> {
    /// Index of term `j` of the tail in the original sequence.
    fn tail_index(&self, j: u64) -> u64 {
        self.offset + j
    }

    fn tail(&self) -> Lrs {
        let d = self.s.order();
        let k = self.offset as usize;
        let coeffs = self.s.coeffs()[..d - k].to_vec();
        let all = rational_terms(self.s, d as u64);
        Lrs::general(coeffs, all[k..].to_vec()).expect("matching lengths")
    }
}

fn check_modular(
    ctx: &mut Context,
    cert: &ModularCertificate,
    period: u64,
    residue: u64,
) -> Check<Vec<u64>> {
    let m = cert.modulus;
    ensure(m >= 2, || "modulus below 2".into())?;
    ensure(cert.state_period >= 1, || {
        "state period must be positive".into()
    })?;
    let tail = ctx.tail();
    let e = tail.order();
    ensure(e >= 1, || "modular certificate on a vanishing tail".into())?;
    let span = cert.state_period.lcm(&period);
    let horizon = cert.preperiod + cert.state_period.max(span) + e as u64;
    ensure(horizon <= REPLAY_LIMIT, || {
        "modular transcript too long".into()
    })?;

    let den = tail
        .coeffs()
        .iter()
        .fold(BigInt::one(), |a, c| a.lcm(c.denom()));
    let mb = BigInt::from(m);
    let dq = Rational::from_integer(den);
    let mut p = Rational::one();
    let mut c = Vec::new();
    for ci in tail.coeffs() {
        p = &p * &dq;
        c.push(
            (ci * &p)
                .to_integer()
                .mod_floor(&mb)
                .to_u64()
                .expect("reduced"),
        );
    }
    let mut scaled = Vec::new();
    let mut p = Rational::one();
    for u in tail.init() {
        scaled.push(u * &p);
        p = &p * &dq;
    }
    let big_e = scaled.iter().fold(BigInt::one(), |a, q| a.lcm(q.denom()));
    let ints: Vec<BigInt> = scaled
        .iter()
        .map(|q| (q * Rational::from_integer(big_e.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    let content = if content.is_zero() { BigInt::one() } else { content };
    let mut w: Vec<u64> = ints
        .iter()
        .map(|x| {
            (x / &content)
                .mod_floor(&mb)
                .to_u64()
                .expect("reduced")
        })
        .collect();
    while (w.len() as u64) < horizon {
        let n = w.len();
        let mut acc = 0u128;
        for (i, ci) in c.iter().enumerate() {
            acc = (acc + *ci as u128 * w[n - 1 - i] as u128) % m as u128;
        }
        w.push(acc as u64);
    }
    let pre = cert.preperiod as usize;
    let t = cert.state_period as usize;
    ensure(w[pre..pre + e] == w[pre + t..pre + t + e], || {
        format!("state at {pre} does not recur after {t} steps mod {m}")
    })?;
    for j in cert.preperiod..cert.preperiod + span {
        if j % period == residue % period {
            let idx = pre + (j as usize - pre) % t;
            ensure(w[idx] != 0, || format!("position {j} vanishes mod {m}"))?;
        }
    }
    let expected: Vec<u64> = (0..cert.preperiod)
        .filter(|&j| j % period == residue % period && w[j as usize] == 0)
        .collect();
    ensure(expected == cert.zero_residual_positions, || {
        "zero residual positions do not match".into()
    })?;
    let mut zeros = Vec::new();
    for &j in &expected {
        let n = ctx.tail_index(j);
        if ctx.replay.is_zero(n)? {
            zeros.push(n);
        }
    }
    Ok(zeros)
}

fn check_dominant(
    ctx: &mut Context,
    cert: &DominantCertificate,
    period: u64,
    residue: u64,
) -> Check<Vec<u64>> {
    let d = ctx.s.order() as u64;
    let index = |m: u64| ctx.offset + residue + period * m;
    let needed = 2 * d + 2;
    let last = index(needed);
    ensure(last <= REPLAY_LIMIT, || {
        "class subsequence beyond replay limit".into()
    })?;
    let all = rational_terms(ctx.s, last + 1);
    let v: Vec<Rational> = (0..needed)
        .map(|m| all[index(m) as usize].clone())
        .collect();
    let (c, init) = hankel_recurrence(&v);
    let e = c.len();
    ensure(e >= 1, || "class subsequence vanishes".into())?;
    ensure(cert.cutoff <= REPLAY_LIMIT, || {
        "cutoff beyond replay limit".into()
    })?;

    let mut pc = vec![Rational::zero(); e + 1];
    pc[e] = Rational::one();
    for (i, ci) in c.iter().enumerate() {
        pc[e - 1 - i] = -ci;
    }
    let p = Polynomial::new(pc);

    if e == 1 {
        ensure(cert.root_lo == c[0] && cert.root_hi == c[0], || {
            "root mismatch".into()
        })?;
        ensure(!c[0].is_zero() && !init[0].is_zero(), || {
            "geometric sequence vanishes".into()
        })?;
    } else {
        let (r1, r2) = (&cert.inner_radius, &cert.outer_radius);
        ensure(r1.is_positive() && r1 < r2, || "radii out of order".into())?;
        for r in [r1, r2] {
            let inside = count_roots_in_disk(&p, r).map_err(|e| e.to_string())?;
            ensure(inside == e - 1, || {
                format!("{inside} of {e} roots inside radius {r}")
            })?;
        }
        let (lo, hi) = (&cert.root_lo, &cert.root_hi);
        ensure(lo < hi, || "empty root interval".into())?;
        ensure(lo.is_positive() || hi.is_negative(), || {
            "root interval meets zero".into()
        })?;
        let rho_lo = lo.abs().min(hi.abs());
        ensure(&rho_lo > r2, || {
            "root interval inside the outer radius".into()
        })?;
        ensure(!p.eval(lo).is_zero(), || "root at interval endpoint".into())?;
        let n = sturm_count(&p, lo, hi).map_err(|e| e.to_string())?;
        ensure(n == 1, || format!("{n} roots in the root interval"))?;

        // v_m = sum of residues of z^m B(z) / P(z)
        let mut b = vec![Rational::zero(); e];
        for k in 0..e {
            let mut a = init[k].clone();
            for i in 1..=k {
                a -= &c[i - 1] * &init[k - i];
            }
            b[e - 1 - k] = a;
        }
        let b = Polynomial::new(b);
        let x = Interval::new(lo.clone(), hi.clone());
        let a = x
            .eval(&b)
            .div(&x.eval(&p.derivative()))
            .ok_or("derivative encloses zero")?;
        ensure(
            cert.coeff_lower.is_positive() && a.mig() >= cert.coeff_lower,
            || "dominant coefficient bound not established".into(),
        )?;
        let mut b_max = Rational::zero();
        let mut pw = Rational::one();
        for bi in b.coeffs() {
            b_max += bi.abs() * &pw;
            pw = &pw * r2;
        }
        let k = r2 * b_max / ((&rho_lo - r2) * num_traits::pow(r2 - r1, e - 1));
        ensure(cert.remainder_constant >= k, || {
            "remainder constant too small".into()
        })?;
        let g = round_dyadic(&(&rho_lo / r2), 64, false);
        let g = if g > Rational::one() { g } else { &rho_lo / r2 };
        let grown = num_traits::pow(g, cert.cutoff as usize) * &cert.coeff_lower;
        ensure(grown > k, || {
            "cutoff too small for the remainder bound".into()
        })?;
    }
    let mut zeros = Vec::new();
    for m in 0..cert.cutoff {
        let n = index(m);
        if ctx.replay.is_zero(n)? {
            zeros.push(n);
        }
    }
    Ok(zeros)
}

fn check_polynomial(
    ctx: &mut Context,
    cert: &PolynomialCertificate,
    period: u64,
    residue: u64,
) -> Check<Vec<u64>> {
    let d = ctx.s.order() as u64;
    let index = |m: u64| ctx.offset + residue + period * m;
    let needed = 2 * d + 2;
    let last = index(needed);
    ensure(last <= REPLAY_LIMIT, || {
        "class subsequence beyond replay limit".into()
    })?;
    ensure(cert.cutoff <= REPLAY_LIMIT, || {
        "cutoff beyond replay limit".into()
    })?;
    let all = rational_terms(ctx.s, last + 1);
    let v: Vec<Rational> = (0..needed)
        .map(|m| all[index(m) as usize].clone())
        .collect();
    let (c, _) = hankel_recurrence(&v);
    let e = c.len();
    ensure(e >= 2, || {
        "class subsequence is not a polynomial of positive degree".into()
    })?;

    // (X - 1)^e = X^e - sum c_i X^{e-i} with c_i = (-1)^{i+1} C(e, i)
    let mut binom = BigInt::one();
    for (i, ci) in c.iter().enumerate() {
        let i = i + 1;
        binom = binom * BigInt::from(e + 1 - i) / BigInt::from(i);
        let want = if i % 2 == 1 {
            binom.clone()
        } else {
            -binom.clone()
        };
        ensure(*ci == Rational::from_integer(want), || {
            "characteristic polynomial is not a power of X - 1".into()
        })?;
    }

    // P from the Vandermonde system on m = 0..e-1
    let rows = (0..e)
        .map(|m| {
            let x = Rational::from_integer(BigInt::from(m));
            let mut pw = Rational::one();
            (0..e)
                .map(|_| {
                    let t = pw.clone();
                    pw = &pw * &x;
                    t
                })
                .collect()
        })
        .collect();
    let vandermonde = Matrix::from_rows(rows).map_err(|e| e.to_string())?;
    let p = vandermonde
        .solve(&v[..e])
        .map_err(|e| e.to_string())?
        .ok_or("singular interpolation system")?;
    ensure(p == cert.coefficients, || {
        "interpolating polynomial mismatch".into()
    })?;
    let lead = p[e - 1].abs();
    ensure(!lead.is_zero(), || {
        "degenerate interpolating polynomial".into()
    })?;
    let ratio = p[..e - 1]
        .iter()
        .map(|a| a.abs() / &lead)
        .fold(Rational::zero(), |a, b| a.max(b));
    ensure(
        Rational::from_integer(BigInt::from(cert.cutoff)) >= Rational::one() + ratio,
        || "cutoff below the root bound".into(),
    )?;

    let mut zeros = Vec::new();
    for m in 0..cert.cutoff {
        let n = index(m);
        if ctx.replay.is_zero(n)? {
            zeros.push(n);
        }
    }
    Ok(zeros)
}

fn check_class(ctx: &mut Context, cc: &ClassCertificate) -> Check<Vec<u64>> {
    ensure(cc.offset == ctx.offset, || {
        "certificate offset mismatch".into()
    })?;
    ensure(cc.period >= 1 && cc.residue < cc.period, || {
        "bad residue class".into()
    })?;
    match &cc.proof {
        NonzeroCertificate::Modular(m) => check_modular(ctx, m, cc.period, cc.residue),
        NonzeroCertificate::DominantRoot(d) => check_dominant(ctx, d, cc.period, cc.residue),
        NonzeroCertificate::Polynomial(p) => check_polynomial(ctx, p, cc.period, cc.residue),
    }
}

/// Replays every claim of `dec` against `s`; `Err` carries the first failure.
pub fn check_decomposition(s: &Lrs, dec: &ZeroSetDecomposition) -> Check<()> {
    let d = s.order() as u64;
    let offset = s.coeffs().iter().rev().take_while(|c| c.is_zero()).count() as u64;
    let mut ctx = Context {
        s,
        offset,
        replay: Replay::new(s),
    };

    ensure(dec.exceptional.windows(2).all(|w| w[0] < w[1]), || {
        "exceptional indices not strictly increasing".into()
    })?;
    for &n in &dec.exceptional {
        ensure(ctx.replay.is_zero(n)?, || format!("u_{n} is not zero"))?;
        ensure(!dec.progressions.iter().any(|p| p.contains(n)), || {
            format!("exceptional index {n} lies in a progression")
        })?;
    }
    for p in &dec.progressions {
        ensure(p.b >= 1, || "progression with zero step".into())?;
        ensure(p.a < p.b || p.a < offset + p.b, || {
            format!("progression ({}, {}) not in normal form", p.a, p.b)
        })?;
        for m in 0..=d {
            let n = p.a + p.b * m;
            ensure(ctx.replay.is_zero(n)?, || {
                format!("u_{n} in progression is not zero")
            })?;
        }
    }

    let mut class_zeros = Vec::new();
    for cc in &dec.certificates {
        let z = check_class(&mut ctx, cc)?;
        class_zeros.push((cc.period, cc.residue, z));
    }
    for (_, _, z) in &class_zeros {
        for n in z {
            ensure(dec.contains(*n), || {
                format!("zero u_{n} missing from the claim")
            })?;
        }
    }

    match dec.status {
        Status::SearchBounded => {
            for n in 0..=dec.search_bound {
                let z = ctx.replay.is_zero(n)?;
                ensure(z == dec.contains(n), || format!("claim wrong at index {n}"))?;
            }
        }
        Status::Complete => {
            for n in 0..offset {
                if ctx.replay.is_zero(n)? {
                    ensure(dec.contains(n), || {
                        format!("zero u_{n} missing from the claim")
                    })?;
                }
            }
            let period = match dec.certificates.first() {
                Some(c) => c.period,
                None => dec.progressions.iter().fold(1u64, |l, p| l.lcm(&p.b)),
            };
            ensure(dec.certificates.iter().all(|c| c.period == period), || {
                "certificates disagree on the period".into()
            })?;
            for r in 0..period {
                let start = offset + r;
                let by_progression = dec
                    .progressions
                    .iter()
                    .any(|p| period % p.b == 0 && p.a <= start && (start - p.a) % p.b == 0);
                let by_certificate = class_zeros.iter().any(|(_, res, _)| *res == r);
                ensure(by_progression || by_certificate, || {
                    format!("residue class {r} mod {period} is not accounted for")
                })?;
            }
        }
    }
    Ok(())
}

/// Whether `dec` is a correct account of the zeros of `s`.
pub fn verify_certificate(s: &Lrs, dec: &ZeroSetDecomposition) -> bool {
    check_decomposition(s, dec).is_ok()
}
