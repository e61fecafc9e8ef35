//! Sparse multivariate polynomials over the active field.
//!
//! A fixed registry of nine named variables covers every role the kernel
//! needs: surface coordinates x1..x3, parameters t1, t2, the duplicate
//! parameters h1, h2 used by the cylinder criterion and properness tests,
//! and the tag variables Z, W used by nested-resultant elimination (and
//! reused as the unknowns when solving for reparametrization pairs).
//! Terms are kept in a BTreeMap under graded lexicographic order; the
//! maximal key is the leading term.

pub mod factor;
pub mod gcd;
pub mod resultant;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{FieldCtx, Scalar};

pub const NVARS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X1 = 0,
    X2 = 1,
    X3 = 2,
    T1 = 3,
    T2 = 4,
    H1 = 5,
    H2 = 6,
    Z = 7,
    W = 8,
}

pub const ALL_VARS: [Var; NVARS] =
    [Var::X1, Var::X2, Var::X3, Var::T1, Var::T2, Var::H1, Var::H2, Var::Z, Var::W];

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::X3 => "x3",
            Var::T1 => "t1",
            Var::T2 => "t2",
            Var::H1 => "h1",
            Var::H2 => "h2",
            Var::Z => "Z",
            Var::W => "W",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        ALL_VARS.iter().copied().find(|v| v.name() == name)
    }

    /// The surface coordinate x1/x2/x3 with 1-based index.
    pub fn coord(i: usize) -> Var {
        match i {
            1 => Var::X1,
            2 => Var::X2,
            3 => Var::X3,
            _ => panic!("coordinate index out of range"),
        }
    }
}

/// Exponent vector under graded lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono(pub [u16; NVARS]);

impl Mono {
    pub fn unit() -> Mono {
        Mono([0; NVARS])
    }

    pub fn of_var(v: Var, e: u16) -> Mono {
        let mut m = [0; NVARS];
        m[v as usize] = e;
        Mono(m)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, rhs: &Mono) -> Mono {
        let mut m = [0; NVARS];
        for i in 0..NVARS {
            m[i] = self.0[i].checked_add(rhs.0[i]).expect("exponent overflow");
        }
        Mono(m)
    }

    /// Component-wise division; None when some exponent would go negative.
    pub fn try_div(&self, rhs: &Mono) -> Option<Mono> {
        let mut m = [0; NVARS];
        for i in 0..NVARS {
            m[i] = self.0[i].checked_sub(rhs.0[i])?;
        }
        Some(Mono(m))
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v as usize]
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}^{}", ALL_VARS[i].name(), e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial. Zero coefficients are never stored; two
/// polynomials are equal iff their term maps are.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Mono, Scalar>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MultiPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::unit(), c);
        }
        MultiPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        MultiPoly::constant(Scalar::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::monomial(Scalar::one(), Mono::of_var(v, 1))
    }

    pub fn var_pow(v: Var, e: u16) -> Self {
        MultiPoly::monomial(Scalar::one(), Mono::of_var(v, e))
    }

    pub fn monomial(c: Scalar, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Scalar)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| *m == Mono::unit())
    }

    /// The constant value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            return self.terms.get(&Mono::unit()).cloned();
        }
        None
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn vars_present(&self) -> Vec<Var> {
        ALL_VARS.iter().copied().filter(|&v| self.contains_var(v)).collect()
    }

    /// Leading (graded-lex maximal) monomial and coefficient.
    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// True when every coefficient lies in Q.
    pub fn is_over_rationals(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    /// Coefficient-wise Galois conjugate (sqrt(d) -> -sqrt(d)).
    pub fn conjugate(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conjugate())).collect(),
        }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Scalar, ctx: &FieldCtx) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, k)| (*m, k.mul(c, ctx))).collect(),
        }
    }

    pub fn mul(&self, rhs: &MultiPoly, ctx: &FieldCtx) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let (small, large) = if self.nterms() <= rhs.nterms() { (self, rhs) } else { (rhs, self) };
        let mut out = MultiPoly::zero();
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                out.add_term(m1.mul(m2), c1.mul(c2, ctx));
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono, c: &Scalar, ctx: &FieldCtx) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m0, c0)| (m0.mul(m), c0.mul(c, ctx)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32, ctx: &FieldCtx) -> MultiPoly {
        let mut out = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx);
            }
        }
        out
    }

    /// Exact multivariate division: self = q * rhs, or `NotDivisible`.
    pub fn exact_div(&self, rhs: &MultiPoly, ctx: &FieldCtx) -> Result<MultiPoly> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(MultiPoly::zero());
        }
        if let Some(c) = rhs.as_constant() {
            let inv = c.inv(ctx)?;
            return Ok(self.scale(&inv, ctx));
        }
        let (dm, dc) = rhs.leading().expect("nonzero");
        let dm = *dm;
        let dc_inv = dc.inv(ctx)?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((lm, lc)) = rem.leading() {
            let qm = lm.try_div(&dm).ok_or(Error::NotDivisible)?;
            let qc = lc.mul(&dc_inv, ctx);
            quot.add_term(qm, qc.clone());
            rem = rem.sub(&rhs.mul_mono(&qm, &qc, ctx));
        }
        Ok(quot)
    }

    pub fn divides(&self, other: &MultiPoly, ctx: &FieldCtx) -> bool {
        other.exact_div(self, ctx).is_ok()
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                let mut m2 = *m;
                m2.0[v as usize] = e - 1;
                out.add_term(m2, c.mul(&Scalar::from_int(e as i64), &FieldCtx::rational()));
            }
        }
        out
    }

    /// Substitute a scalar for one variable.
    pub fn evaluate_partial(&self, v: Var, value: &Scalar, ctx: &FieldCtx) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut m2 = *m;
            m2.0[v as usize] = 0;
            out.add_term(m2, c.mul(&value.pow(e as u32, ctx), ctx));
        }
        out
    }

    /// Substitute polynomials for variables (simultaneously).
    pub fn substitute(&self, map: &[(Var, MultiPoly)], ctx: &FieldCtx) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone());
            let mut rest = *m;
            for (v, repl) in map {
                let e = rest.0[*v as usize];
                if e > 0 {
                    rest.0[*v as usize] = 0;
                    term = term.mul(&repl.pow(e as u32, ctx), ctx);
                }
            }
            out = out.add(&term.mul_mono(&rest, &Scalar::one(), ctx));
        }
        out
    }

    /// Rename a variable (the target must not occur).
    pub fn rename_var(&self, from: Var, to: Var) -> MultiPoly {
        debug_assert!(!self.contains_var(to) || from == to);
        if from == to {
            return self.clone();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = *m;
                    m2.0[to as usize] = m2.0[from as usize];
                    m2.0[from as usize] = 0;
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    /// View as univariate in `v`: coefficients by ascending power of `v`,
    /// each free of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut m2 = *m;
            m2.0[v as usize] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }

    /// Inverse of `coeffs_in`.
    pub fn from_coeffs_in(v: Var, coeffs: &[MultiPoly], ctx: &FieldCtx) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            out = out.add(&c.mul_mono(&Mono::of_var(v, e as u16), &Scalar::one(), ctx));
        }
        out
    }

    /// Leading coefficient w.r.t. one variable (a polynomial in the others).
    pub fn leading_coeff_in(&self, v: Var) -> MultiPoly {
        let d = self.degree_in(v);
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == d {
                let mut m2 = *m;
                m2.0[v as usize] = 0;
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Lowest total degree among the terms (order of vanishing at the origin).
    pub fn min_total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).min().unwrap_or(0)
    }

    /// Canonical representative modulo nonzero field constants: unique monic
    /// form rescaled by the positive rational that clears denominators and
    /// common integer content. Comparisons "up to constants" reduce to
    /// equality of canonical forms.
    pub fn canonical(&self, ctx: &FieldCtx) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let lc = self.leading().expect("nonzero").1.clone();
        let monic = self.scale(&lc.inv(ctx).expect("nonzero lead"), ctx);
        // positive rational rescale: lcm of denominators / gcd of numerators
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in monic.terms.values() {
            for part in [c.rational_part(), c.radical_part()] {
                if !part.is_zero() {
                    den_lcm = den_lcm.lcm(part.denom());
                    num_gcd = num_gcd.gcd(part.numer());
                }
            }
        }
        if num_gcd.is_zero() {
            num_gcd = BigInt::one();
        }
        let s = Scalar::from_rational(BigRational::new(den_lcm, num_gcd));
        monic.scale(&s, ctx)
    }

    /// Equality up to a nonzero field constant, decided by cross-multiplying
    /// leading coefficients (no normalization round-trip).
    pub fn eq_up_to_constant(&self, other: &MultiPoly, ctx: &FieldCtx) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() == other.is_zero();
        }
        let (lm1, lc1) = self.leading().expect("nonzero");
        let (lm2, lc2) = other.leading().expect("nonzero");
        if lm1 != lm2 {
            return false;
        }
        self.scale(lc2, ctx) == other.scale(lc1, ctx)
    }

    /// Scale so that all components are integers with overall content 1 and
    /// the leading coefficient has positive sign key. The result differs from
    /// `self` by a positive-rational factor times +-1.
    pub fn primitive_int_normalized(&self, ctx: &FieldCtx) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            for part in [c.rational_part(), c.radical_part()] {
                if !part.is_zero() {
                    den_lcm = den_lcm.lcm(part.denom());
                    num_gcd = num_gcd.gcd(part.numer());
                }
            }
        }
        if num_gcd.is_zero() {
            num_gcd = BigInt::one();
        }
        let mut scaled = self.scale(&Scalar::from_rational(BigRational::new(den_lcm, num_gcd)), ctx);
        if scaled.leading().expect("nonzero").1.sign_key() < 0 {
            scaled = scaled.neg();
        }
        scaled
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*{:?}", c, m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> FieldCtx {
        FieldCtx::rational()
    }

    pub(crate) fn random_poly(rng: &mut ChaCha8Rng, vars: &[Var], max_deg: u16, nterms: usize) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for _ in 0..nterms {
            let mut m = Mono::unit();
            for &v in vars {
                m.0[v as usize] = rng.random_range(0..=max_deg);
            }
            let c = Scalar::from_int(rng.random_range(-5i64..=5));
            p = p.add(&MultiPoly::monomial(c, m));
        }
        p
    }

    #[test]
    fn derivative_of_square() {
        let x1 = MultiPoly::var(Var::X1);
        let p = x1.mul(&x1, &ctx());
        assert_eq!(p.derivative(Var::X1), x1.scale(&Scalar::from_int(2), &ctx()));
    }

    #[test]
    fn exact_divide_difference_of_squares() {
        let c = ctx();
        let x1 = MultiPoly::var(Var::X1);
        let p = x1.mul(&x1, &c).sub(&MultiPoly::one()); // x1^2 - 1
        let d = x1.sub(&MultiPoly::one()); // x1 - 1
        let q = p.exact_div(&d, &c).unwrap();
        assert_eq!(q, x1.add(&MultiPoly::one()));
        // and a non-divisible case
        let bad = p.exact_div(&x1.add(&MultiPoly::from_int(2)), &c);
        assert!(bad.is_err());
    }

    #[test]
    fn sphere_section_by_partial_evaluation() {
        // f = x1^2+x2^2+x3^2-1 at x3 = 0 -> x1^2+x2^2-1
        let c = ctx();
        let f = MultiPoly::var_pow(Var::X1, 2)
            .add(&MultiPoly::var_pow(Var::X2, 2))
            .add(&MultiPoly::var_pow(Var::X3, 2))
            .sub(&MultiPoly::one());
        let s = f.evaluate_partial(Var::X3, &Scalar::zero(), &c);
        let expect = MultiPoly::var_pow(Var::X1, 2)
            .add(&MultiPoly::var_pow(Var::X2, 2))
            .sub(&MultiPoly::one());
        assert_eq!(s, expect);
    }

    #[test]
    fn ring_axioms_on_seeded_samples() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(0xA5A5);
        let vars = [Var::X1, Var::X2, Var::T1, Var::T2];
        for _ in 0..1000 {
            let p = random_poly(&mut rng, &vars, 4, 4);
            let q = random_poly(&mut rng, &vars, 4, 4);
            let r = random_poly(&mut rng, &vars, 4, 4);
            assert_eq!(p.mul(&q, &c), q.mul(&p, &c));
            assert_eq!(p.mul(&q.mul(&r, &c), &c), p.mul(&q, &c).mul(&r, &c));
            assert_eq!(p.mul(&q.add(&r), &c), p.mul(&q, &c).add(&p.mul(&r, &c)));
        }
    }

    #[test]
    fn exact_div_inverts_mul() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1D);
        let vars = [Var::X1, Var::X2, Var::X3];
        for _ in 0..200 {
            let p = random_poly(&mut rng, &vars, 3, 3);
            let q = random_poly(&mut rng, &vars, 3, 3);
            if q.is_zero() {
                continue;
            }
            let prod = p.mul(&q, &c);
            assert_eq!(prod.exact_div(&q, &c).unwrap(), p);
        }
    }

    #[test]
    fn canonical_is_idempotent_and_constant_blind() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let p = random_poly(&mut rng, &[Var::X1, Var::X2], 4, 4);
            if p.is_zero() {
                continue;
            }
            let k = p.canonical(&c);
            assert_eq!(k, k.canonical(&c));
            let scaled = p.scale(&Scalar::from_frac(-7, 3), &c);
            assert_eq!(scaled.canonical(&c), k);
            assert!(scaled.eq_up_to_constant(&p, &c));
        }
    }
}
