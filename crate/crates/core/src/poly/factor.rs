//! Factorization of polynomials in at most two of the registry variables.
//!
//! Over Q: univariate Zassenhaus (modular factorization, Hensel lifting,
//! subset recombination) and bivariate factorization by evaluation plus
//! series lifting in the second variable. Over the active Q(sqrt(d)):
//! a norm-based split (shift, take the norm, factor over Q, read factors
//! off gcds), which subsumes the monomial/linear/quadratic split-offs the
//! pipelines rely on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gcd::{content_pp, gcd, squarefree_part};
use super::{MultiPoly, Var};
use crate::error::{Error, Result};
use crate::scalar::{FieldCtx, Scalar};

/// Total-degree budget for the squarefree part of a factorization input.
pub const FACTOR_BUDGET: u32 = 8;

/// unit * product of (irreducible, multiplicity); irreducible factors are
/// integer-primitive with positive leading sign, in canonical order.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<(MultiPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self, ctx: &FieldCtx) -> MultiPoly {
        let mut p = MultiPoly::constant(self.unit.clone());
        for (f, e) in &self.factors {
            p = p.mul(&f.pow(*e, ctx), ctx);
        }
        p
    }
}

/// Complete factorization over the active field. Input must involve at most
/// two variables; the squarefree part must stay within the degree budget.
pub fn factor(p: &MultiPoly, ctx: &FieldCtx) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::Structural("factorization of zero".into()));
    }
    if let Some(c) = p.as_constant() {
        return Ok(Factorization { unit: c, factors: vec![] });
    }
    let vars = p.vars_present();
    if vars.len() > 2 {
        return Err(Error::TooManyVariables);
    }
    let sf = squarefree_part(p, ctx)?;
    if sf.total_degree() > FACTOR_BUDGET {
        return Err(Error::FactorBudgetExceeded { degree: sf.total_degree(), budget: FACTOR_BUDGET });
    }
    let irreducibles = factor_squarefree(&sf, ctx)?;
    // multiplicities by repeated exact division
    let mut factors = Vec::new();
    let mut rest = p.clone();
    for f in irreducibles {
        let mut mult = 0u32;
        while let Ok(q) = rest.exact_div(&f, ctx) {
            rest = q;
            mult += 1;
        }
        debug_assert!(mult >= 1);
        factors.push((f, mult));
    }
    let unit = rest
        .as_constant()
        .ok_or_else(|| Error::Structural("factor recombination left a non-constant".into()))?;
    factors.sort_by(canonical_factor_order);
    Ok(Factorization { unit, factors })
}

/// Deterministic order used whenever "consider the components in canonical
/// order" appears downstream: by total degree, then term count, then the
/// term map itself.
pub fn canonical_factor_order(a: &(MultiPoly, u32), b: &(MultiPoly, u32)) -> std::cmp::Ordering {
    factor_key(&a.0).cmp(&factor_key(&b.0))
}

fn factor_key(p: &MultiPoly) -> (u32, usize, String) {
    (p.total_degree(), p.nterms(), format!("{:?}", p))
}

/// Irreducible factors of a squarefree polynomial (<= 2 vars), no budget
/// check; used internally on norms whose degree may exceed the public budget.
pub fn factor_squarefree(p: &MultiPoly, ctx: &FieldCtx) -> Result<Vec<MultiPoly>> {
    let mut out = Vec::new();
    factor_squarefree_into(p, ctx, &mut out)?;
    for f in &mut out {
        *f = f.primitive_int_normalized(ctx);
    }
    out.sort_by(|a, b| factor_key(a).cmp(&factor_key(b)));
    Ok(out)
}

fn factor_squarefree_into(p: &MultiPoly, ctx: &FieldCtx, out: &mut Vec<MultiPoly>) -> Result<()> {
    if p.is_constant() {
        return Ok(());
    }
    let vars = p.vars_present();
    match vars.len() {
        0 => Ok(()),
        1 => {
            let v = vars[0];
            if p.is_over_rationals() {
                let factors = factor_univariate_q(p, v)?;
                if ctx.is_rational() {
                    out.extend(factors);
                } else {
                    for f in factors {
                        split_over_extension(&f, ctx, out)?;
                    }
                }
                Ok(())
            } else {
                split_over_extension(p, ctx, out)
            }
        }
        2 => {
            let (vx, vy) = (vars[0], vars[1]);
            // split off content in the main variable (a univariate in vy)
            let (cont, pp) = content_pp(p, &[vx], ctx);
            if !cont.is_constant() {
                factor_squarefree_into(&cont, ctx, out)?;
                return factor_squarefree_into(&pp, ctx, out);
            }
            if p.is_over_rationals() {
                let factors = factor_bivariate_q(p, vx, vy)?;
                if ctx.is_rational() {
                    out.extend(factors);
                } else {
                    for f in factors {
                        split_over_extension(&f, ctx, out)?;
                    }
                }
                Ok(())
            } else {
                split_over_extension(p, ctx, out)
            }
        }
        _ => Err(Error::TooManyVariables),
    }
}

// ---------------------------------------------------------------------------
// dense univariate polynomials over Q and Z
// ---------------------------------------------------------------------------

type QP = Vec<BigRational>;
type ZP = Vec<BigInt>;

fn qp_trim(p: &mut QP) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn qp_deg(p: &QP) -> usize {
    p.len().saturating_sub(1)
}

fn qp_add(a: &QP, b: &QP) -> QP {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    qp_trim(&mut out);
    out
}

fn qp_sub(a: &QP, b: &QP) -> QP {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    qp_trim(&mut out);
    out
}

fn qp_mul(a: &QP, b: &QP) -> QP {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qp_trim(&mut out);
    out
}

fn qp_scale(a: &QP, s: &BigRational) -> QP {
    let mut out: QP = a.iter().map(|c| c * s).collect();
    qp_trim(&mut out);
    out
}

/// Division with remainder over Q.
fn qp_divmod(a: &QP, b: &QP) -> (QP, QP) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.clone();
    let db = qp_deg(b);
    let lb = b.last().unwrap().clone();
    let mut quo = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while !rem.is_empty() && qp_deg(&rem) >= db {
        let dr = qp_deg(&rem);
        let c = rem.last().unwrap() / &lb;
        let shift = dr - db;
        quo[shift] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            let t = bc * &c;
            rem[shift + j] -= t;
        }
        qp_trim(&mut rem);
    }
    qp_trim(&mut quo);
    (quo, rem)
}

fn qp_gcd(a: &QP, b: &QP) -> QP {
    let mut x = a.clone();
    let mut y = b.clone();
    qp_trim(&mut x);
    qp_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = qp_divmod(&x, &y);
        x = std::mem::replace(&mut y, r);
    }
    if x.is_empty() {
        return x;
    }
    let lc = x.last().unwrap().clone();
    qp_scale(&x, &lc.recip())
}

/// Extended gcd: (s, t) with s*a + t*b = 1 for coprime a, b.
fn qp_ext_gcd_one(a: &QP, b: &QP) -> (QP, QP) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![BigRational::one()], QP::new());
    let (mut t0, mut t1) = (QP::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = qp_divmod(&r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
        let ns = qp_sub(&s0, &qp_mul(&q, &s1));
        s0 = std::mem::replace(&mut s1, ns);
        let nt = qp_sub(&t0, &qp_mul(&q, &t1));
        t0 = std::mem::replace(&mut t1, nt);
    }
    assert_eq!(qp_deg(&r0), 0, "ext gcd inputs must be coprime");
    let inv = r0[0].recip();
    (qp_scale(&s0, &inv), qp_scale(&t0, &inv))
}

fn qp_derivative(p: &QP) -> QP {
    let mut out: QP = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    qp_trim(&mut out);
    out
}

fn qp_is_squarefree(p: &QP) -> bool {
    if qp_deg(p) <= 1 {
        return true;
    }
    let g = qp_gcd(p, &qp_derivative(p));
    qp_deg(&g) == 0
}

/// Clear denominators and integer content: primitive ZP with the same roots.
fn qp_to_primitive_zp(p: &QP) -> ZP {
    let mut den = BigInt::one();
    for c in p {
        den = den.lcm(c.denom());
    }
    let mut z: ZP = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &z {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in &mut z {
            *c /= &content;
        }
    }
    if z.last().is_some_and(|c| c.is_negative()) {
        for c in &mut z {
            *c = -c.clone();
        }
    }
    z
}

fn zp_deg(p: &ZP) -> usize {
    p.len().saturating_sub(1)
}

fn zp_trim(p: &mut ZP) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn zp_mul(a: &ZP, b: &ZP) -> ZP {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic divisor over Z; None if not divisible.
fn zp_div_exact_monic(a: &ZP, b: &ZP) -> Option<ZP> {
    assert!(b.last().is_some_and(|c| c.is_one()));
    let mut rem = a.clone();
    let db = zp_deg(b);
    if a.is_empty() {
        return Some(vec![]);
    }
    if zp_deg(a) < db {
        return None;
    }
    let mut quo = vec![BigInt::zero(); a.len() - db];
    while !rem.is_empty() && zp_deg(&rem) >= db {
        let dr = zp_deg(&rem);
        let c = rem.last().unwrap().clone();
        let shift = dr - db;
        quo[shift] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            rem[shift + j] -= bc * &c;
        }
        zp_trim(&mut rem);
    }
    if rem.is_empty() {
        Some(quo)
    } else {
        None
    }
}

fn zp_primitive(p: &mut ZP) {
    let mut content = BigInt::zero();
    for c in p.iter() {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in p.iter_mut() {
            *c /= &content;
        }
    }
    if p.last().is_some_and(|c| c.is_negative()) {
        for c in p.iter_mut() {
            *c = -c.clone();
        }
    }
}

// ---------------------------------------------------------------------------
// arithmetic mod a small prime
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
struct PP {
    c: Vec<u64>,
}

fn pp_trim(p: &mut PP) {
    while p.c.last() == Some(&0) {
        p.c.pop();
    }
}

fn pp_deg(p: &PP) -> usize {
    p.c.len().saturating_sub(1)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, m: u64) -> u64 {
    mod_pow(a, m - 2, m)
}

fn pp_mul(a: &PP, b: &PP, m: u64) -> PP {
    if a.c.is_empty() || b.c.is_empty() {
        return PP { c: vec![] };
    }
    let mut out = vec![0u64; a.c.len() + b.c.len() - 1];
    for (i, &x) in a.c.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.c.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % m as u128) as u64;
        }
    }
    let mut p = PP { c: out };
    pp_trim(&mut p);
    p
}

fn pp_sub(a: &PP, b: &PP, m: u64) -> PP {
    let mut out = vec![0u64; a.c.len().max(b.c.len())];
    for (i, &x) in a.c.iter().enumerate() {
        out[i] = x % m;
    }
    for (i, &y) in b.c.iter().enumerate() {
        out[i] = (out[i] + m - y % m) % m;
    }
    let mut p = PP { c: out };
    pp_trim(&mut p);
    p
}

fn pp_make_monic(a: &PP, m: u64) -> PP {
    if a.c.is_empty() {
        return a.clone();
    }
    let inv = mod_inv(*a.c.last().unwrap(), m);
    PP { c: a.c.iter().map(|&x| ((x as u128 * inv as u128) % m as u128) as u64).collect() }
}

fn pp_divmod(a: &PP, b: &PP, m: u64) -> (PP, PP) {
    assert!(!b.c.is_empty());
    let db = pp_deg(b);
    let lb_inv = mod_inv(*b.c.last().unwrap(), m);
    let mut rem = a.clone();
    pp_trim(&mut rem);
    let mut quo = vec![0u64; a.c.len().saturating_sub(db)];
    while !rem.c.is_empty() && pp_deg(&rem) >= db {
        let dr = pp_deg(&rem);
        let c = ((rem.c[dr] as u128 * lb_inv as u128) % m as u128) as u64;
        let shift = dr - db;
        if shift < quo.len() {
            quo[shift] = c;
        }
        for (j, &bc) in b.c.iter().enumerate() {
            let t = (bc as u128 * c as u128 % m as u128) as u64;
            rem.c[shift + j] = (rem.c[shift + j] + m - t) % m;
        }
        pp_trim(&mut rem);
    }
    let mut q = PP { c: quo };
    pp_trim(&mut q);
    (q, rem)
}

fn pp_gcd(a: &PP, b: &PP, m: u64) -> PP {
    let mut x = a.clone();
    let mut y = b.clone();
    pp_trim(&mut x);
    pp_trim(&mut y);
    while !y.c.is_empty() {
        let (_, r) = pp_divmod(&x, &y, m);
        x = std::mem::replace(&mut y, r);
    }
    pp_make_monic(&x, m)
}

fn pp_ext_gcd_one(a: &PP, b: &PP, m: u64) -> (PP, PP) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (PP { c: vec![1] }, PP { c: vec![] });
    let (mut t0, mut t1) = (PP { c: vec![] }, PP { c: vec![1] });
    while !r1.c.is_empty() {
        let (q, r) = pp_divmod(&r0, &r1, m);
        r0 = std::mem::replace(&mut r1, r);
        let ns = pp_sub(&s0, &pp_mul(&q, &s1, m), m);
        s0 = std::mem::replace(&mut s1, ns);
        let nt = pp_sub(&t0, &pp_mul(&q, &t1, m), m);
        t0 = std::mem::replace(&mut t1, nt);
    }
    assert_eq!(pp_deg(&r0), 0, "mod-p ext gcd inputs must be coprime");
    let inv = mod_inv(r0.c[0], m);
    let scale = |p: &PP| PP {
        c: p.c.iter().map(|&x| (x as u128 * inv as u128 % m as u128) as u64).collect(),
    };
    (scale(&s0), scale(&t0))
}

fn pp_pow_mod(base: &PP, mut e: BigInt, f: &PP, m: u64) -> PP {
    let mut acc = PP { c: vec![1] };
    let mut b = pp_divmod(base, f, m).1;
    while e.is_positive() {
        if e.is_odd() {
            acc = pp_divmod(&pp_mul(&acc, &b, m), f, m).1;
        }
        e >>= 1;
        if e.is_positive() {
            b = pp_divmod(&pp_mul(&b, &b, m), f, m).1;
        }
    }
    acc
}

fn pp_derivative(p: &PP, m: u64) -> PP {
    let mut out = PP {
        c: p
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (c as u128 * (i as u64 % m) as u128 % m as u128) as u64)
            .collect(),
    };
    pp_trim(&mut out);
    out
}

/// Cantor-Zassenhaus factorization of a monic squarefree polynomial mod p.
fn pp_factor_squarefree(f: &PP, m: u64, rng: &mut ChaCha8Rng) -> Vec<PP> {
    let mut out = Vec::new();
    // distinct-degree
    let mut rest = f.clone();
    let x = PP { c: vec![0, 1] };
    let mut w = x.clone();
    let mut d = 0usize;
    while pp_deg(&rest) > 0 {
        d += 1;
        if 2 * d > pp_deg(&rest) {
            out.push(rest.clone());
            break;
        }
        w = pp_pow_mod(&w, BigInt::from(m), &rest, m);
        let g = pp_gcd(&pp_sub(&w, &x, m), &rest, m);
        if pp_deg(&g) > 0 {
            equal_degree_split(&g, d, m, rng, &mut out);
            rest = pp_divmod(&rest, &g, m).0;
            w = pp_divmod(&w, &rest, m).1;
        }
    }
    out.sort_by(|a, b| (pp_deg(a), &a.c).cmp(&(pp_deg(b), &b.c)));
    out
}

fn equal_degree_split(f: &PP, d: usize, m: u64, rng: &mut ChaCha8Rng, out: &mut Vec<PP>) {
    if pp_deg(f) == d {
        out.push(f.clone());
        return;
    }
    let e: BigInt = (BigInt::from(m).pow(d as u32) - BigInt::one()) / BigInt::from(2);
    loop {
        let r = PP {
            c: (0..pp_deg(f)).map(|_| rng.random_range(0..m)).collect(),
        };
        let mut r = r;
        pp_trim(&mut r);
        if r.c.is_empty() {
            continue;
        }
        let u = pp_pow_mod(&r, e.clone(), f, m);
        let u1 = pp_sub(&u, &PP { c: vec![1] }, m);
        let g = pp_gcd(&u1, f, m);
        if pp_deg(&g) > 0 && pp_deg(&g) < pp_deg(f) {
            equal_degree_split(&g, d, m, rng, out);
            equal_degree_split(&pp_divmod(f, &g, m).0, d, m, rng, out);
            return;
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// univariate Zassenhaus over Z
// ---------------------------------------------------------------------------

fn zp_to_pp(f: &ZP, m: u64) -> PP {
    let mb = BigInt::from(m);
    let mut p = PP {
        c: f.iter()
            .map(|c| {
                let r = c.mod_floor(&mb);
                r.to_string().parse::<u64>().unwrap()
            })
            .collect(),
    };
    pp_trim(&mut p);
    p
}

/// Symmetric representative in (-m/2, m/2].
fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn zp_mod_sym(p: &ZP, m: &BigInt) -> ZP {
    let mut out: ZP = p.iter().map(|c| symmetric_mod(c, m)).collect();
    zp_trim(&mut out);
    out
}

/// One quadratic Hensel step (von zur Gathen & Gerhard, Alg. 15.10),
/// all polynomials monic where required. Lifts f = g*h and the Bezout pair
/// from mod m to mod m^2.
#[allow(clippy::too_many_arguments)]
fn hensel_step(f: &ZP, g: &ZP, h: &ZP, s: &ZP, t: &ZP, m: &BigInt) -> (ZP, ZP, ZP, ZP) {
    let mm = m * m;
    let e = zp_mod_sym(&zp_sub(f, &zp_mul(g, h)), &mm);
    let (q, r) = zp_divmod_mod(&zp_mul(s, &e), h, &mm);
    let gstar = zp_mod_sym(&zp_add(&zp_add(g, &zp_mul(t, &e)), &zp_mul(&q, g)), &mm);
    let hstar = zp_mod_sym(&zp_add(h, &r), &mm);
    let b = zp_mod_sym(
        &zp_sub(&zp_add(&zp_mul(s, &gstar), &zp_mul(t, &hstar)), &vec![BigInt::one()]),
        &mm,
    );
    let (c, d) = zp_divmod_mod(&zp_mul(s, &b), &hstar, &mm);
    let sstar = zp_mod_sym(&zp_sub(s, &d), &mm);
    let tstar = zp_mod_sym(&zp_sub(&zp_sub(t, &zp_mul(t, &b)), &zp_mul(&c, &gstar)), &mm);
    (gstar, hstar, sstar, tstar)
}

fn zp_add(a: &ZP, b: &ZP) -> ZP {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    zp_trim(&mut out);
    out
}

fn zp_sub(a: &ZP, b: &ZP) -> ZP {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    zp_trim(&mut out);
    out
}

/// Division with remainder mod m by a monic divisor, symmetric coefficients.
fn zp_divmod_mod(a: &ZP, b: &ZP, m: &BigInt) -> (ZP, ZP) {
    assert!(b.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    let db = zp_deg(b);
    let mut rem = zp_mod_sym(a, m);
    let mut quo = vec![BigInt::zero(); rem.len().saturating_sub(db)];
    while !rem.is_empty() && zp_deg(&rem) >= db {
        let dr = zp_deg(&rem);
        let c = rem.last().unwrap().clone();
        let shift = dr - db;
        quo[shift] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            rem[shift + j] = symmetric_mod(&(&rem[shift + j] - bc * &c), m);
        }
        zp_trim(&mut rem);
    }
    zp_trim(&mut quo);
    (zp_mod_sym(&quo, m), rem)
}

/// Lift a list of pairwise-coprime monic factors of the monic f from mod p
/// to mod p^2^j >= bound, sequentially pairing each factor against the
/// product of the rest.
fn hensel_lift_list(f: &ZP, factors: &[PP], p: u64, bound: &BigInt) -> (Vec<ZP>, BigInt) {
    let mut modulus = BigInt::from(p);
    let mut target = modulus.clone();
    while &target < bound {
        target = &target * &target;
    }
    let mut lifted: Vec<ZP> = Vec::new();
    let mut f_cur = f.clone();
    let pb = BigInt::from(p);
    for i in 0..factors.len() {
        if i + 1 == factors.len() {
            lifted.push(zp_mod_sym(&f_cur, &target));
            break;
        }
        let g0 = &factors[i];
        let mut h0 = PP { c: vec![1] };
        for rest in &factors[i + 1..] {
            h0 = pp_mul(&h0, rest, p);
        }
        let (s0, t0) = pp_ext_gcd_one(g0, &h0, p);
        let mut g = zp_mod_sym(&pp_to_zp(g0), &pb);
        let mut h = zp_mod_sym(&pp_to_zp(&h0), &pb);
        let mut s = zp_mod_sym(&pp_to_zp(&s0), &pb);
        let mut t = zp_mod_sym(&pp_to_zp(&t0), &pb);
        modulus = pb.clone();
        while modulus < target {
            let (g2, h2, s2, t2) = hensel_step(&f_cur, &g, &h, &s, &t, &modulus);
            g = g2;
            h = h2;
            s = s2;
            t = t2;
            modulus = &modulus * &modulus;
        }
        lifted.push(zp_mod_sym(&g, &target));
        f_cur = zp_mod_sym(&h, &target);
    }
    (lifted, target)
}

fn pp_to_zp(p: &PP) -> ZP {
    p.c.iter().map(|&c| BigInt::from(c)).collect()
}

/// Irreducible factors over Z of a primitive squarefree polynomial with
/// positive leading coefficient; output factors are primitive.
fn factor_z_squarefree(f: &ZP) -> Vec<ZP> {
    let n = zp_deg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    // monicize: fhat(x) = l^(n-1) f(x/l)
    let l = f.last().unwrap().clone();
    let mut fhat: ZP = Vec::with_capacity(n + 1);
    for (i, c) in f.iter().enumerate() {
        let mut v = c.clone();
        let mut e = (n - 1) as i64 - i as i64;
        if e < 0 {
            e = 0; // leading term: l^(n-1) * l * x^n / l^n = x^n
            v = BigInt::one();
            fhat.push(v);
            continue;
        }
        for _ in 0..e {
            v *= &l;
        }
        fhat.push(v);
    }
    debug_assert!(fhat.last().unwrap().is_one());
    // choose a prime keeping fhat squarefree
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_FAC7);
    let mut prime = 3u64;
    let modular = loop {
        if is_prime_u64(prime) {
            let fp = zp_to_pp(&fhat, prime);
            if pp_deg(&fp) == n {
                let g = pp_gcd(&fp, &pp_derivative(&fp, prime), prime);
                if pp_deg(&g) == 0 {
                    break pp_factor_squarefree(&pp_make_monic(&fp, prime), prime, &mut rng);
                }
            }
        }
        prime += 2;
        assert!(prime < 100_000, "no usable prime found");
    };
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // factor coefficient bound (Mignotte-style, generous)
    let maxabs = fhat.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = (BigInt::one() << (n + 2)) * BigInt::from(n as u64 + 1) * maxabs;
    let (mut lifted, modulus) = hensel_lift_list(&fhat, &modular, prime, &(&bound * 2 + 1));

    let mut result_monic: Vec<ZP> = Vec::new();
    let mut fhat_cur = fhat.clone();
    let mut card = 1usize;
    'outer: while 2 * card <= lifted.len() {
        let indices: Vec<usize> = (0..lifted.len()).collect();
        for subset in subsets_of(&indices, card) {
            let mut cand = vec![BigInt::one()];
            for &i in &subset {
                cand = zp_mod_sym(&zp_mul(&cand, &lifted[i]), &modulus);
            }
            if let Some(q) = zp_div_exact_monic(&fhat_cur, &cand) {
                result_monic.push(cand);
                fhat_cur = q;
                let keep: Vec<ZP> = lifted
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                lifted = keep;
                continue 'outer;
            }
        }
        card += 1;
    }
    if zp_deg(&fhat_cur) > 0 {
        result_monic.push(fhat_cur);
    }
    // undo monicization: g(x) = pp(ghat(l*x))
    result_monic
        .into_iter()
        .map(|ghat| {
            let mut g: ZP = ghat
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let mut v = c.clone();
                    for _ in 0..i {
                        v *= &l;
                    }
                    v
                })
                .collect();
            zp_primitive(&mut g);
            g
        })
        .collect()
}

fn subsets_of(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

// ---------------------------------------------------------------------------
// conversions
// ---------------------------------------------------------------------------

fn multipoly_to_qp(p: &MultiPoly, v: Var) -> Option<QP> {
    let mut out = vec![BigRational::zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let e = m.exp(v) as usize;
        if m.total_degree() != m.exp(v) as u32 {
            return None; // other variables present
        }
        out[e] = c.as_rational()?.clone();
    }
    qp_trim(&mut out);
    Some(out)
}

fn qp_to_multipoly(p: &QP, v: Var) -> MultiPoly {
    MultiPoly::from_terms(
        p.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (super::Mono::of_var(v, i as u16), Scalar::from_rational(c.clone()))),
    )
}

fn zp_to_multipoly(p: &ZP, v: Var) -> MultiPoly {
    MultiPoly::from_terms(p.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
        (
            super::Mono::of_var(v, i as u16),
            Scalar::from_rational(BigRational::from_integer(c.clone())),
        )
    }))
}

/// Dense bivariate view: coefficient of vx^i is a QP in vy.
fn multipoly_to_bp(p: &MultiPoly, vx: Var, vy: Var) -> Option<Vec<QP>> {
    let dx = p.degree_in(vx) as usize;
    let dy = p.degree_in(vy) as usize;
    let mut out = vec![vec![BigRational::zero(); dy + 1]; dx + 1];
    for (m, c) in p.terms() {
        let i = m.exp(vx) as usize;
        let j = m.exp(vy) as usize;
        if m.total_degree() != (i + j) as u32 {
            return None;
        }
        out[i][j] = c.as_rational()?.clone();
    }
    for row in &mut out {
        qp_trim(row);
    }
    Some(out)
}

fn bp_to_multipoly(p: &[QP], vx: Var, vy: Var) -> MultiPoly {
    let mut terms = Vec::new();
    for (i, row) in p.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                let mut m = super::Mono::unit();
                m.0[vx as usize] = i as u16;
                m.0[vy as usize] = j as u16;
                terms.push((m, Scalar::from_rational(c.clone())));
            }
        }
    }
    MultiPoly::from_terms(terms)
}

// ---------------------------------------------------------------------------
// univariate over Q
// ---------------------------------------------------------------------------

/// Irreducible factors over Q of a squarefree univariate polynomial.
fn factor_univariate_q(p: &MultiPoly, v: Var) -> Result<Vec<MultiPoly>> {
    let qp = multipoly_to_qp(p, v)
        .ok_or_else(|| Error::Structural("univariate factorization expects rational coefficients".into()))?;
    let z = qp_to_primitive_zp(&qp);
    if zp_deg(&z) == 0 {
        return Ok(vec![]);
    }
    Ok(factor_z_squarefree(&z)
        .into_iter()
        .map(|f| zp_to_multipoly(&f, v))
        .collect())
}

// ---------------------------------------------------------------------------
// bivariate over Q: evaluation + series lifting
// ---------------------------------------------------------------------------

fn qp_truncate(p: &mut QP, k: usize) {
    if p.len() > k {
        p.truncate(k);
        qp_trim(p);
    }
}

fn qp_mul_trunc(a: &QP, b: &QP, k: usize) -> QP {
    let mut out = qp_mul(a, b);
    qp_truncate(&mut out, k);
    out
}

/// Inverse of a power series with nonzero constant term, mod y^k.
fn qp_series_inverse(a: &QP, k: usize) -> QP {
    assert!(!a.is_empty() && !a[0].is_zero());
    let mut inv = vec![a[0].recip()];
    let mut prec = 1usize;
    while prec < k {
        // Newton: inv <- inv * (2 - a*inv), doubling the precision
        let m = (prec * 2).min(k);
        let ai = qp_mul_trunc(a, &inv, m);
        let mut two_minus = qp_scale(&ai, &-BigRational::one());
        if two_minus.is_empty() {
            two_minus = vec![BigRational::from_integer(2.into())];
        } else {
            two_minus[0] += BigRational::from_integer(2.into());
        }
        inv = qp_mul_trunc(&inv, &two_minus, m);
        prec = m;
    }
    qp_truncate(&mut inv, k);
    inv
}

/// x-polynomials with truncated series coefficients.
type XS = Vec<QP>;

fn xs_mul(a: &XS, b: &XS, k: usize) -> XS {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![QP::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let prod = qp_mul_trunc(x, y, k);
            out[i + j] = qp_add(&out[i + j], &prod);
        }
    }
    while out.last().is_some_and(|c| c.is_empty()) {
        out.pop();
    }
    out
}

fn xs_sub(a: &XS, b: &XS) -> XS {
    let mut out = vec![QP::new(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = qp_sub(&out[i], y);
    }
    while out.last().is_some_and(|c| c.is_empty()) {
        out.pop();
    }
    out
}

/// Lift the coprime monic factorization target(x, y) = G * H from y^1 to
/// y^K by linear steps. `target` must be monic in x.
fn lift_pair(target: &XS, g0: &QP, h0: &QP, k: usize) -> (XS, XS) {
    let (_s, t) = qp_ext_gcd_one(g0, h0);
    let mut g: XS = g0.iter().map(|c| vec![c.clone()]).collect();
    let mut h: XS = h0.iter().map(|c| vec![c.clone()]).collect();
    for step in 1..k {
        let prod = xs_mul(&g, &h, k);
        let e = xs_sub(target, &prod);
        // x-polynomial of y^step coefficients
        let mut ex: QP = e
            .iter()
            .map(|c| c.get(step).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        qp_trim(&mut ex);
        if ex.is_empty() {
            continue;
        }
        let (_, u) = qp_divmod(&qp_mul(&ex, &t), g0);
        let v_num = qp_sub(&ex, &qp_mul(&u, h0));
        let (v, rv) = qp_divmod(&v_num, g0);
        debug_assert!(rv.is_empty(), "lift quotient must be exact");
        for (i, c) in u.iter().enumerate() {
            while g[i].len() <= step {
                g[i].push(BigRational::zero());
            }
            g[i][step] += c;
            qp_trim(&mut g[i]);
        }
        for (i, c) in v.iter().enumerate() {
            while h[i].len() <= step {
                h[i].push(BigRational::zero());
            }
            h[i][step] += c;
            qp_trim(&mut h[i]);
        }
    }
    (g, h)
}

/// Irreducible factors over Q of a squarefree bivariate polynomial that is
/// primitive w.r.t. vx (no Q[vy]-content) with positive degree in both.
fn factor_bivariate_q(p: &MultiPoly, vx: Var, vy: Var) -> Result<Vec<MultiPoly>> {
    let ctx = FieldCtx::rational();
    let n = p.degree_in(vx) as usize;
    debug_assert!(n >= 1 && p.degree_in(vy) >= 1);
    // evaluation point: lc_x survives and the image stays squarefree
    let lc = p.leading_coeff_in(vx);
    let mut point: Option<i64> = None;
    for a in eval_candidates() {
        let s = Scalar::from_int(a);
        let lc_at = lc.evaluate_partial(vy, &s, &ctx);
        if lc_at.is_zero() {
            continue;
        }
        let u = p.evaluate_partial(vy, &s, &ctx);
        let uq = multipoly_to_qp(&u, vx).expect("rational univariate image");
        if qp_is_squarefree(&uq) {
            point = Some(a);
            break;
        }
    }
    let a = point.ok_or_else(|| Error::Structural("no good evaluation point for bivariate factorization".into()))?;
    // shift so that the evaluation sits at vy = 0
    let shift = MultiPoly::var(vy).add(&MultiPoly::from_int(a));
    let p_sh = p.substitute(&[(vy, shift)], &ctx);
    let u = p_sh.evaluate_partial(vy, &Scalar::zero(), &ctx);
    let uq = multipoly_to_qp(&u, vx).expect("rational");
    let uz = qp_to_primitive_zp(&uq);
    let uz_factors = factor_z_squarefree(&uz);
    if uz_factors.len() == 1 {
        return Ok(vec![p.clone()]);
    }
    let k = p.degree_in(vy) as usize + lc.degree_in(vy) as usize + 1;
    // monic target: lc_x(p_sh)(y)^{-1} * p_sh mod y^K
    let bp = multipoly_to_bp(&p_sh, vx, vy).ok_or_else(|| {
        Error::Structural("bivariate factorization expects rational coefficients".into())
    })?;
    let lam: QP = bp.last().expect("nonzero").clone();
    let lam_inv = qp_series_inverse(&lam, k);
    let target: XS = bp.iter().map(|row| qp_mul_trunc(row, &lam_inv, k)).collect();
    // monic modular factors at y = 0
    let monic_factors: Vec<QP> = uz_factors
        .iter()
        .map(|f| {
            let qf: QP = f.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            let lcq = qf.last().unwrap().recip();
            qp_scale(&qf, &lcq)
        })
        .collect();
    // sequential pair lifting
    let mut lifted: Vec<XS> = Vec::new();
    let mut cur_target = target;
    for i in 0..monic_factors.len() {
        if i + 1 == monic_factors.len() {
            lifted.push(cur_target.clone());
            break;
        }
        let g0 = &monic_factors[i];
        let mut h0 = vec![BigRational::one()];
        for rest in &monic_factors[i + 1..] {
            h0 = qp_mul(&h0, rest);
        }
        let (g, h) = lift_pair(&cur_target, g0, &h0, k);
        lifted.push(g);
        cur_target = h;
    }
    // subset recombination
    let unshift = MultiPoly::var(vy).sub(&MultiPoly::from_int(a));
    let mut remaining = p.clone();
    let mut live: Vec<XS> = lifted;
    let mut found: Vec<MultiPoly> = Vec::new();
    let mut card = 1usize;
    'outer: while 2 * card <= live.len() {
        let indices: Vec<usize> = (0..live.len()).collect();
        for subset in subsets_of(&indices, card) {
            // candidate = lam * prod, then strip the Q[y]-content
            let mut prod: XS = vec![vec![BigRational::one()]];
            for &i in &subset {
                prod = xs_mul(&prod, &live[i], k);
            }
            let cand: XS = prod.iter().map(|c| qp_mul_trunc(c, &lam, k)).collect();
            // content over y of the x-coefficients
            let mut cont: QP = vec![];
            for c in &cand {
                cont = qp_gcd(&cont, c);
                if qp_deg(&cont) == 0 && !cont.is_empty() {
                    break;
                }
            }
            if cont.is_empty() {
                continue;
            }
            let primitive: XS = cand
                .iter()
                .map(|c| {
                    let (q, r) = qp_divmod(c, &cont);
                    debug_assert!(r.is_empty());
                    q
                })
                .collect();
            let cand_poly = bp_to_multipoly(&primitive, vx, vy)
                .substitute(&[(vy, unshift.clone())], &ctx)
                .primitive_int_normalized(&ctx);
            if let Ok(q) = remaining.exact_div(&cand_poly, &ctx) {
                found.push(cand_poly);
                remaining = q;
                let keep: Vec<XS> = live
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                live = keep;
                continue 'outer;
            }
        }
        card += 1;
    }
    if !remaining.is_constant() {
        found.push(remaining.primitive_int_normalized(&ctx));
    }
    Ok(found)
}

fn eval_candidates() -> impl Iterator<Item = i64> {
    (0..).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] }).take(200)
}

// ---------------------------------------------------------------------------
// splitting over the quadratic extension (norm method)
// ---------------------------------------------------------------------------

/// Split a squarefree polynomial (irreducible over Q when its coefficients
/// are rational) into irreducible factors over Q(sqrt(d)).
fn split_over_extension(p: &MultiPoly, ctx: &FieldCtx, out: &mut Vec<MultiPoly>) -> Result<()> {
    debug_assert!(!ctx.is_rational());
    let vars = p.vars_present();
    let vmain = *vars
        .first()
        .ok_or_else(|| Error::Structural("constant passed to extension split".into()))?;
    for s in 0..16i64 {
        let shift = MultiPoly::var(vmain).add(&MultiPoly::constant(
            Scalar::sqrt_d(BigRational::from_integer(s.into())),
        ));
        let q = p.substitute(&[(vmain, shift)], ctx);
        let norm = q.mul(&q.conjugate(), ctx);
        debug_assert!(norm.is_over_rationals());
        let sf = squarefree_part(&norm, ctx)?;
        if !sf.eq_up_to_constant(&norm, ctx) {
            continue; // norm not squarefree; try the next shift
        }
        let norm_factors = match vars.len() {
            1 => factor_univariate_q(&norm, vmain)?,
            2 => {
                let (vx, vy) = (vars[0], vars[1]);
                let (cont, pp) = content_pp(&norm, &[vx], ctx);
                let mut fs = Vec::new();
                if !cont.is_constant() {
                    fs.extend(factor_univariate_q(&cont, vy)?);
                }
                if pp.degree_in(vy) == 0 {
                    fs.extend(factor_univariate_q(&pp, vx)?);
                } else {
                    fs.extend(factor_bivariate_q(&pp, vx, vy)?);
                }
                fs
            }
            _ => return Err(Error::TooManyVariables),
        };
        let unshift = MultiPoly::var(vmain).sub(&MultiPoly::constant(
            Scalar::sqrt_d(BigRational::from_integer(s.into())),
        ));
        for h in norm_factors {
            let g = gcd(&q, &h, ctx);
            if !g.is_constant() {
                out.push(g.substitute(&[(vmain, unshift.clone())], ctx));
            }
        }
        return Ok(());
    }
    Err(Error::BudgetExhausted("no squarefree norm shift found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> FieldCtx {
        FieldCtx::rational()
    }

    fn x(v: Var) -> MultiPoly {
        MultiPoly::var(v)
    }

    fn assert_factors_multiply_back(p: &MultiPoly, ctx: &FieldCtx) {
        let f = factor(p, ctx).unwrap();
        assert!(f.expand(ctx) == *p, "factorization must multiply back: {:?}", f);
    }

    #[test]
    fn univariate_quartics() {
        let ctx = c();
        // (x^2+1)(x^2-2) stays in two irreducible quadratics over Q
        let p = x(Var::X1)
            .pow(2, &ctx)
            .add(&MultiPoly::one())
            .mul(&x(Var::X1).pow(2, &ctx).sub(&MultiPoly::from_int(2)), &ctx);
        let f = factor(&p, &ctx).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(f.factors.iter().all(|(q, e)| q.total_degree() == 2 && *e == 1));
        assert_factors_multiply_back(&p, &ctx);
    }

    #[test]
    fn x_squared_plus_one_over_q_and_qi() {
        let p = x(Var::X1).pow(2, &c()).add(&MultiPoly::one());
        let f = factor(&p, &c()).unwrap();
        assert_eq!(f.factors.len(), 1); // irreducible over Q
        let qi = FieldCtx::quadratic(-1).unwrap();
        let f = factor(&p, &qi).unwrap();
        assert_eq!(f.factors.len(), 2); // (x-I)(x+I)
        assert!(f.expand(&qi).eq_up_to_constant(&p, &qi));
    }

    #[test]
    fn multiplicities_recovered() {
        let ctx = c();
        let a = x(Var::X1).sub(&MultiPoly::one());
        let b = x(Var::X1).add(&x(Var::X2));
        let p = a.pow(3, &ctx).mul(&b.pow(2, &ctx), &ctx).scale(&Scalar::from_int(6), &ctx);
        let f = factor(&p, &ctx).unwrap();
        let mut mults: Vec<u32> = f.factors.iter().map(|(_, e)| *e).collect();
        mults.sort();
        assert_eq!(mults, vec![2, 3]);
        assert_factors_multiply_back(&p, &ctx);
    }

    #[test]
    fn example2_section_factorization() {
        // f0_12 = -x1*x2*(49x1^2 - 20x1 - 2x1x2 - x2^2 + 5x2)
        let ctx = c();
        let conic = x(Var::X1)
            .pow(2, &ctx)
            .scale(&Scalar::from_int(49), &ctx)
            .sub(&x(Var::X1).scale(&Scalar::from_int(20), &ctx))
            .sub(&x(Var::X1).mul(&x(Var::X2), &ctx).scale(&Scalar::from_int(2), &ctx))
            .sub(&x(Var::X2).pow(2, &ctx))
            .add(&x(Var::X2).scale(&Scalar::from_int(5), &ctx));
        let p = x(Var::X1)
            .mul(&x(Var::X2), &ctx)
            .mul(&conic, &ctx)
            .neg();
        let f = factor(&p, &ctx).unwrap();
        assert_eq!(f.factors.len(), 3);
        let degs: Vec<u32> = f.factors.iter().map(|(q, _)| q.total_degree()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
        assert!(f.factors[2].0.eq_up_to_constant(&conic, &ctx));
        assert_factors_multiply_back(&p, &ctx);
    }

    #[test]
    fn random_conic_products_recovered() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let ctx = c();
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0111C);
        let mut done = 0;
        while done < 8 {
            let mk = |rng: &mut ChaCha8Rng| {
                x(Var::X1)
                    .pow(2, &ctx)
                    .scale(&Scalar::from_int(rng.random_range(1i64..=3)), &ctx)
                    .add(&x(Var::X2).pow(2, &ctx).scale(&Scalar::from_int(rng.random_range(1i64..=3)), &ctx))
                    .add(&x(Var::X1).mul(&x(Var::X2), &ctx).scale(&Scalar::from_int(rng.random_range(-2i64..=2)), &ctx))
                    .add(&x(Var::X1).scale(&Scalar::from_int(rng.random_range(-2i64..=2)), &ctx))
                    .add(&MultiPoly::from_int(rng.random_range(1i64..=4)))
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let fa = factor(&a, &ctx).unwrap();
            let fb = factor(&b, &ctx).unwrap();
            if fa.factors.len() != 1 || fb.factors.len() != 1 || a.eq_up_to_constant(&b, &ctx) {
                continue; // want two distinct irreducible conics
            }
            let p = a.mul(&b, &ctx);
            let f = factor(&p, &ctx).unwrap();
            assert_eq!(f.factors.len(), 2, "{:?}", p);
            assert_factors_multiply_back(&p, &ctx);
            done += 1;
        }
    }

    #[test]
    fn budget_rejects_large_squarefree_input() {
        let ctx = c();
        let mut p = MultiPoly::one();
        for k in 0..9 {
            p = p.mul(&x(Var::X1).add(&x(Var::X2).scale(&Scalar::from_int(k), &ctx)).add(&MultiPoly::from_int(k + 1)), &ctx);
        }
        assert!(matches!(
            factor(&p, &ctx),
            Err(Error::FactorBudgetExceeded { .. })
        ));
    }

    #[test]
    fn trager_splits_conjugate_sextic() {
        // x1^2*(x3^2+1)^2 + (x3^2-1)^2 splits into two conjugate cubics over Q(I)
        let ctx = FieldCtx::quadratic(-1).unwrap();
        let a = x(Var::X3).pow(2, &ctx).add(&MultiPoly::one());
        let b = x(Var::X3).pow(2, &ctx).sub(&MultiPoly::one());
        let p = x(Var::X1)
            .pow(2, &ctx)
            .mul(&a.pow(2, &ctx), &ctx)
            .add(&b.pow(2, &ctx));
        let fs = factor_squarefree(&p, &ctx).unwrap();
        assert_eq!(fs.len(), 2);
        for f in &fs {
            assert_eq!(f.degree_in(Var::X1), 1);
            assert!(!f.is_over_rationals());
        }
        let prod = fs[0].mul(&fs[1], &ctx);
        assert!(prod.eq_up_to_constant(&p, &ctx));
    }
}
