//! Reduced rational functions, simultaneous rational substitution,
//! pair inversion and Moebius equivalence.

use crate::error::{Error, Result};
use crate::poly::gcd::{gcd, primitive_part_in};
use crate::poly::{MultiPoly, Var};
use crate::scalar::{FieldCtx, Scalar};

/// Rational function num/den with gcd(num, den) = 1 and the denominator
/// normalized to integer-primitive form with positive leading sign.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl std::fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly, ctx: &FieldCtx) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFunc { num, den };
        r.reduce(ctx);
        Ok(r)
    }

    pub fn from_poly(p: MultiPoly) -> RatFunc {
        RatFunc { num: p, den: MultiPoly::one() }
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(MultiPoly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(MultiPoly::one())
    }

    pub fn constant(c: Scalar) -> RatFunc {
        RatFunc::from_poly(MultiPoly::constant(c))
    }

    pub fn var(v: Var) -> RatFunc {
        RatFunc::from_poly(MultiPoly::var(v))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self, ctx: &FieldCtx) -> Option<Scalar> {
        if !self.is_constant() {
            return None;
        }
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        n.div(&d, ctx).ok()
    }

    /// max(deg num, deg den) in one variable.
    pub fn degree_in(&self, v: Var) -> u16 {
        self.num.degree_in(v).max(self.den.degree_in(v))
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn is_over_rationals(&self) -> bool {
        self.num.is_over_rationals() && self.den.is_over_rationals()
    }

    fn reduce(&mut self, ctx: &FieldCtx) {
        if self.num.is_zero() {
            self.den = MultiPoly::one();
            return;
        }
        let g = gcd(&self.num, &self.den, ctx);
        if !g.is_constant() {
            self.num = self.num.exact_div(&g, ctx).expect("gcd divides");
            self.den = self.den.exact_div(&g, ctx).expect("gcd divides");
        }
        // canonical denominator: monic-normalized then integer-primitive,
        // so constant units (rational or radical) land in the numerator
        let target = self.den.canonical(ctx);
        let adjust = self
            .den
            .exact_div(&target, ctx)
            .expect("normalization is a constant factor")
            .as_constant()
            .expect("constant factor");
        self.den = target;
        self.num = self
            .num
            .scale(&adjust.inv(ctx).expect("nonzero"), ctx);
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, rhs: &RatFunc, ctx: &FieldCtx) -> RatFunc {
        let num = self
            .num
            .mul(&rhs.den, ctx)
            .add(&rhs.num.mul(&self.den, ctx));
        let den = self.den.mul(&rhs.den, ctx);
        RatFunc::new(num, den, ctx).expect("denominator nonzero")
    }

    pub fn sub(&self, rhs: &RatFunc, ctx: &FieldCtx) -> RatFunc {
        self.add(&rhs.neg(), ctx)
    }

    pub fn mul(&self, rhs: &RatFunc, ctx: &FieldCtx) -> RatFunc {
        RatFunc::new(self.num.mul(&rhs.num, ctx), self.den.mul(&rhs.den, ctx), ctx)
            .expect("denominator nonzero")
    }

    pub fn div(&self, rhs: &RatFunc, ctx: &FieldCtx) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.num.mul(&rhs.den, ctx), self.den.mul(&rhs.num, ctx), ctx)
    }

    pub fn inv(&self, ctx: &FieldCtx) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone(), ctx)
    }

    pub fn scale(&self, c: &Scalar, ctx: &FieldCtx) -> RatFunc {
        RatFunc::new(self.num.scale(c, ctx), self.den.clone(), ctx).expect("den nonzero")
    }

    /// Exact composition: substitute rational functions for variables
    /// (simultaneously). Errors when the denominator collapses to zero.
    pub fn compose(&self, subs: &[(Var, RatFunc)], ctx: &FieldCtx) -> Result<RatFunc> {
        let n = substitute_rational(&self.num, subs, ctx)?;
        let d = substitute_rational(&self.den, subs, ctx)?;
        if d.is_zero() {
            let names: Vec<&str> = subs.iter().map(|(v, _)| v.name()).collect();
            return Err(Error::DenominatorVanished(format!(
                "composition into denominator of rational function ({})",
                names.join(",")
            )));
        }
        n.div(&d, ctx)
    }

    /// Compose a univariate rational function with `arg` for `v`.
    pub fn compose_single(&self, v: Var, arg: &RatFunc, ctx: &FieldCtx) -> Result<RatFunc> {
        self.compose(&[(v, arg.clone())], ctx)
    }

    /// Apply a variable renaming (target must not occur).
    pub fn rename_var(&self, from: Var, to: Var) -> RatFunc {
        RatFunc { num: self.num.rename_var(from, to), den: self.den.rename_var(from, to) }
    }
}

/// Simultaneous substitution of rational functions into a polynomial,
/// returning the exact reduced rational result.
pub fn substitute_rational(
    p: &MultiPoly,
    subs: &[(Var, RatFunc)],
    ctx: &FieldCtx,
) -> Result<RatFunc> {
    let active: Vec<&(Var, RatFunc)> = subs.iter().filter(|(v, _)| p.contains_var(*v)).collect();
    if active.is_empty() {
        return Ok(RatFunc::from_poly(p.clone()));
    }
    for (_, r) in &active {
        if r.denom().is_zero() {
            return Err(Error::DivisionByZero);
        }
    }
    // power tables up to the degree of each substituted variable
    let mut num_pows: Vec<Vec<MultiPoly>> = Vec::new();
    let mut den_pows: Vec<Vec<MultiPoly>> = Vec::new();
    let mut degs: Vec<u16> = Vec::new();
    for (v, r) in &active {
        let d = p.degree_in(*v);
        degs.push(d);
        let mut np = vec![MultiPoly::one()];
        let mut dp = vec![MultiPoly::one()];
        for k in 1..=d {
            np.push(np[(k - 1) as usize].mul(r.numer(), ctx));
            dp.push(dp[(k - 1) as usize].mul(r.denom(), ctx));
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut total = MultiPoly::zero();
    for (m, c) in p.terms() {
        let mut rest = *m;
        let mut term = MultiPoly::constant(c.clone());
        for (k, (v, _)) in active.iter().enumerate() {
            let e = m.exp(*v);
            rest.0[*v as usize] = 0;
            term = term.mul(&num_pows[k][e as usize], ctx);
            term = term.mul(&den_pows[k][(degs[k] - e) as usize], ctx);
        }
        term = term.mul_mono(&rest, &Scalar::one(), ctx);
        total = total.add(&term);
    }
    let mut den = MultiPoly::one();
    for (k, _) in active.iter().enumerate() {
        den = den.mul(&den_pows[k][degs[k] as usize], ctx);
    }
    RatFunc::new(total, den, ctx)
}

/// Numerator of the reduced result of a simultaneous rational substitution.
pub fn numer_of_substitution(
    p: &MultiPoly,
    subs: &[(Var, RatFunc)],
    ctx: &FieldCtx,
) -> Result<MultiPoly> {
    Ok(substitute_rational(p, subs, ctx)?.numer().clone())
}

/// Invert a pair of univariate rational functions in `param` seen as a map
/// onto a plane curve with coordinates `out`: returns the rational inverse
/// (a function of the two output variables) when the pair is proper.
///
/// The inverse comes out of the remainder sequence of
/// numer(x - p1(t)), numer(y - p2(t)) w.r.t. t: a degree-1 remainder yields
/// the candidate, which is then certified by exact composition. Shifts
/// t -> t + c work around degenerate sequences.
pub fn invert_pair(
    p1: &RatFunc,
    p2: &RatFunc,
    param: Var,
    out: (Var, Var),
    ctx: &FieldCtx,
) -> Option<RatFunc> {
    debug_assert!(!p1.contains_var(out.0) && !p2.contains_var(out.1));
    let deg1 = p1.degree_in(param);
    let deg2 = p2.degree_in(param);
    if deg1 == 0 && deg2 == 0 {
        return None;
    }
    // fast path: one coordinate already a Moebius function of the parameter
    for (r, v) in [(p1, out.0), (p2, out.1)] {
        if r.degree_in(param) == 1 {
            if let Some(inv) = invert_moebius(r, param, v, ctx) {
                if verify_inverse(&inv, p1, p2, param, out, ctx) {
                    return Some(inv);
                }
            }
        }
    }
    for shift in [0i64, 1, -1, 2, -2, 3] {
        let s = RatFunc::from_poly(
            MultiPoly::var(param).add(&MultiPoly::from_int(shift)),
        );
        let q1 = p1.compose_single(param, &s, ctx).ok()?;
        let q2 = p2.compose_single(param, &s, ctx).ok()?;
        let h1 = MultiPoly::var(out.0)
            .mul(q1.denom(), ctx)
            .sub(q1.numer());
        let h2 = MultiPoly::var(out.1)
            .mul(q2.denom(), ctx)
            .sub(q2.numer());
        if h1.degree_in(param) == 0 || h2.degree_in(param) == 0 {
            continue;
        }
        for rem in remainder_sequence(&h1, &h2, param, ctx) {
            if rem.degree_in(param) != 1 {
                continue;
            }
            let coeffs = rem.coeffs_in(param);
            let num = coeffs[0].neg();
            let den = coeffs[1].clone();
            if den.is_zero() {
                continue;
            }
            let Ok(cand) = RatFunc::new(num, den, ctx) else { continue };
            // undo the shift: inverse(x, y) = cand(x, y) + shift
            let cand =
                cand.add(&RatFunc::from_poly(MultiPoly::from_int(shift)), ctx);
            if verify_inverse(&cand, p1, p2, param, out, ctx) {
                return Some(cand);
            }
        }
    }
    None
}

fn invert_moebius(r: &RatFunc, param: Var, out_var: Var, ctx: &FieldCtx) -> Option<RatFunc> {
    // r = (a t + b)/(c t + d) => t = (d x - b)/(-c x + a)
    let nc = r.numer().coeffs_in(param);
    let dc = r.denom().coeffs_in(param);
    let a = nc.get(1).cloned().unwrap_or_else(MultiPoly::zero);
    let b = nc.first().cloned().unwrap_or_else(MultiPoly::zero);
    let c = dc.get(1).cloned().unwrap_or_else(MultiPoly::zero);
    let d = dc.first().cloned().unwrap_or_else(MultiPoly::zero);
    let x = MultiPoly::var(out_var);
    let num = d.mul(&x, ctx).sub(&b);
    let den = a.sub(&c.mul(&x, ctx));
    if den.is_zero() {
        return None;
    }
    RatFunc::new(num, den, ctx).ok()
}

fn verify_inverse(
    inv: &RatFunc,
    p1: &RatFunc,
    p2: &RatFunc,
    param: Var,
    out: (Var, Var),
    ctx: &FieldCtx,
) -> bool {
    let composed = inv.compose(&[(out.0, p1.clone()), (out.1, p2.clone())], ctx);
    matches!(composed, Ok(r) if r == RatFunc::var(param))
}

/// Primitive remainder sequence w.r.t. `v` (most reduced first).
fn remainder_sequence(a: &MultiPoly, b: &MultiPoly, v: Var, ctx: &FieldCtx) -> Vec<MultiPoly> {
    use crate::poly::gcd::pseudo_rem;
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut seq = Vec::new();
    while !g.is_zero() && g.degree_in(v) > 0 {
        let r = pseudo_rem(&f, &g, v, ctx);
        if r.is_zero() {
            break;
        }
        let r = primitive_part_in(&r, v, ctx);
        seq.push(r.clone());
        f = std::mem::replace(&mut g, r);
    }
    seq.reverse();
    seq
}

/// Degree-1 reparametrization r with P o r = Q, when one exists.
///
/// Both pairs must parametrize the same curve; the witness is found by
/// composing Q with an inverse of P and certified exactly before returning.
pub fn moebius_equivalent(
    p: (&RatFunc, &RatFunc),
    q: (&RatFunc, &RatFunc),
    param: Var,
    ctx: &FieldCtx,
) -> Option<RatFunc> {
    // scratch output variables for the inversion; Z, W are free here
    let out = (Var::Z, Var::W);
    let inv = invert_pair(p.0, p.1, param, out, ctx)?;
    let r = inv
        .compose(&[(out.0, q.0.clone()), (out.1, q.1.clone())], ctx)
        .ok()?;
    if r.degree_in(param) != 1 {
        return None;
    }
    let c0 = p.0.compose_single(param, &r, ctx).ok()?;
    let c1 = p.1.compose_single(param, &r, ctx).ok()?;
    if &c0 == q.0 && &c1 == q.1 {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> FieldCtx {
        FieldCtx::rational()
    }

    fn t() -> MultiPoly {
        MultiPoly::var(Var::T1)
    }

    fn rf(num: MultiPoly, den: MultiPoly) -> RatFunc {
        RatFunc::new(num, den, &c()).unwrap()
    }

    #[test]
    fn compose_shift() {
        // t^2/(t+1) composed with t -> t+1 gives (t+1)^2/(t+2)
        let ctx = c();
        let f = rf(t().pow(2, &ctx), t().add(&MultiPoly::one()));
        let g = RatFunc::from_poly(t().add(&MultiPoly::one()));
        let h = f.compose_single(Var::T1, &g, &ctx).unwrap();
        let expect = rf(
            t().add(&MultiPoly::one()).pow(2, &ctx),
            t().add(&MultiPoly::from_int(2)),
        );
        assert_eq!(h, expect);
    }

    #[test]
    fn circle_symmetry_under_inversion_of_parameter() {
        // 2t/(t^2+1) composed with t -> 1/t is itself
        let ctx = c();
        let f = rf(
            t().scale(&Scalar::from_int(2), &ctx),
            t().pow(2, &ctx).add(&MultiPoly::one()),
        );
        let g = rf(MultiPoly::one(), t());
        assert_eq!(f.compose_single(Var::T1, &g, &ctx).unwrap(), f);
    }

    #[test]
    fn identity_substitution_is_identity() {
        let ctx = c();
        let p = t().pow(3, &ctx).add(&MultiPoly::var(Var::X1));
        let r = substitute_rational(&p, &[(Var::T1, RatFunc::var(Var::T1))], &ctx).unwrap();
        assert_eq!(r, RatFunc::from_poly(p));
    }

    #[test]
    fn reduction_invariant() {
        let ctx = c();
        // (t^2-1)/(t-1) reduces to t+1
        let f = rf(
            t().pow(2, &ctx).sub(&MultiPoly::one()),
            t().sub(&MultiPoly::one()),
        );
        assert_eq!(f, RatFunc::from_poly(t().add(&MultiPoly::one())));
        assert!(gcd(f.numer(), f.denom(), &ctx).is_constant());
    }

    #[test]
    fn compose_associativity_seeded() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let ctx = c();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let mk = |rng: &mut ChaCha8Rng| {
                let a = rng.random_range(-3i64..=3);
                let b = rng.random_range(-3i64..=3);
                let cc = rng.random_range(-3i64..=3);
                let d = rng.random_range(1i64..=3);
                let num = t()
                    .pow(2, &ctx)
                    .scale(&Scalar::from_int(a), &ctx)
                    .add(&t().scale(&Scalar::from_int(b), &ctx))
                    .add(&MultiPoly::from_int(cc));
                let den = t().add(&MultiPoly::from_int(d));
                rf(num, den)
            };
            let f = mk(&mut rng);
            let g = mk(&mut rng);
            let h = mk(&mut rng);
            let lhs = f
                .compose_single(Var::T1, &g, &ctx)
                .and_then(|fg| fg.compose_single(Var::T1, &h, &ctx));
            let rhs = g
                .compose_single(Var::T1, &h, &ctx)
                .and_then(|gh| f.compose_single(Var::T1, &gh, &ctx));
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                _ => {} // a collapsed denominator on one route is fine
            }
        }
    }

    #[test]
    fn invert_parabola_and_reject_improper() {
        let ctx = c();
        let p1 = RatFunc::from_poly(t());
        let p2 = RatFunc::from_poly(t().pow(2, &ctx));
        let inv = invert_pair(&p1, &p2, Var::T1, (Var::X1, Var::X2), &ctx).unwrap();
        assert_eq!(inv, RatFunc::var(Var::X1));
        // (t^2, t^4) is improper onto x2 = x1^2
        let q1 = RatFunc::from_poly(t().pow(2, &ctx));
        let q2 = RatFunc::from_poly(t().pow(4, &ctx));
        assert!(invert_pair(&q1, &q2, Var::T1, (Var::X1, Var::X2), &ctx).is_none());
    }

    #[test]
    fn invert_circle_parametrization() {
        let ctx = c();
        let p1 = rf(
            t().scale(&Scalar::from_int(2), &ctx),
            t().pow(2, &ctx).add(&MultiPoly::one()),
        );
        let p2 = rf(
            t().pow(2, &ctx).sub(&MultiPoly::one()),
            t().pow(2, &ctx).add(&MultiPoly::one()),
        );
        let inv = invert_pair(&p1, &p2, Var::T1, (Var::X1, Var::X2), &ctx).unwrap();
        // inverse composes back to the identity (e.g. (1+x2)/x1 or equivalent)
        let back = inv
            .compose(&[(Var::X1, p1.clone()), (Var::X2, p2.clone())], &ctx)
            .unwrap();
        assert_eq!(back, RatFunc::var(Var::T1));
    }

    #[test]
    fn moebius_witness_found_and_degree_obstruction() {
        let ctx = c();
        let p = (
            RatFunc::from_poly(t()),
            RatFunc::from_poly(t().pow(2, &ctx)),
        );
        let shifted = RatFunc::from_poly(t().add(&MultiPoly::one()));
        let q = (
            shifted.clone(),
            shifted.mul(&shifted, &ctx),
        );
        let r = moebius_equivalent((&p.0, &p.1), (&q.0, &q.1), Var::T1, &ctx).unwrap();
        assert_eq!(r, shifted);
        // (t^3, t^6) needs degree 3: no witness
        let q3 = (
            RatFunc::from_poly(t().pow(3, &ctx)),
            RatFunc::from_poly(t().pow(6, &ctx)),
        );
        assert!(moebius_equivalent((&p.0, &p.1), (&q3.0, &q3.1), Var::T1, &ctx).is_none());
    }

    #[test]
    fn moebius_witness_on_circle() {
        let ctx = c();
        let p1 = rf(
            t().scale(&Scalar::from_int(2), &ctx),
            t().pow(2, &ctx).add(&MultiPoly::one()),
        );
        let p2 = rf(
            t().pow(2, &ctx).sub(&MultiPoly::one()),
            t().pow(2, &ctx).add(&MultiPoly::one()),
        );
        // Q = P o (3t-2)
        let m = RatFunc::from_poly(t().scale(&Scalar::from_int(3), &ctx).sub(&MultiPoly::from_int(2)));
        let q1 = p1.compose_single(Var::T1, &m, &ctx).unwrap();
        let q2 = p2.compose_single(Var::T1, &m, &ctx).unwrap();
        let r = moebius_equivalent((&p1, &p2), (&q1, &q2), Var::T1, &ctx).unwrap();
        assert_eq!(r, m);
    }
}
