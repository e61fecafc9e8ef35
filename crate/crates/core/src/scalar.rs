//! Exact coefficient arithmetic over Q and one quadratic extension Q(sqrt(d)).
//!
//! A scalar is `a + b*sqrt(d)` with `a, b` rational. The squarefree integer `d`
//! is not stored per value; it lives in a [`FieldCtx`] shared by a whole
//! computation. Values with `b = 0` are plain rationals and never need the
//! context. At most one extension is active per computation; asking for a
//! second independent radical fails with `FieldTowerExceeded`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field of a computation: Q when `d` is `None`,
/// Q(sqrt(d)) otherwise. `d` is a squarefree integer, not 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FieldCtx {
    d: Option<BigInt>,
}

impl FieldCtx {
    /// Plain rationals.
    pub fn rational() -> Self {
        FieldCtx { d: None }
    }

    /// Q(sqrt(d)). `d` is reduced to its squarefree part; an error is raised
    /// if that part is 0 or 1 (no extension).
    pub fn quadratic(d: impl Into<BigInt>) -> Result<Self> {
        let d: BigInt = d.into();
        let (_, w) = squarefree_decompose(&d);
        if w.is_zero() || w.is_one() {
            return Err(Error::Structural(format!(
                "sqrt({d}) is rational; not a quadratic extension"
            )));
        }
        Ok(FieldCtx { d: Some(w) })
    }

    pub fn d(&self) -> Option<&BigInt> {
        self.d.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_none()
    }

    /// Adopt the extension `d` if none is active. Errors when a different
    /// extension is already in place.
    pub fn adopt(&mut self, d: &BigInt) -> Result<()> {
        match &self.d {
            None => {
                self.d = Some(d.clone());
                Ok(())
            }
            Some(active) if active == d => Ok(()),
            Some(active) => Err(Error::FieldTowerExceeded {
                active: Some(active.clone()),
                wanted: d.clone(),
            }),
        }
    }

    /// Human-readable field descriptor, e.g. `Q` or `Q(sqrt(-1))`.
    pub fn describe(&self) -> String {
        match &self.d {
            None => "Q".to_string(),
            Some(d) => format!("Q(sqrt({d}))"),
        }
    }
}

/// Element `a + b*sqrt(d)` of the active field. Immutable value type.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar { a: BigRational::one(), b: BigRational::zero() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Scalar { a: BigRational::from_integer(n.into()), b: BigRational::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { a: r, b: BigRational::zero() }
    }

    pub fn from_frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Scalar::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `a + b*sqrt(d)` with the caller responsible for `d` matching the context.
    pub fn quadratic(a: BigRational, b: BigRational) -> Self {
        Scalar { a, b }
    }

    /// Multiple of sqrt(d).
    pub fn sqrt_d(b: BigRational) -> Self {
        Scalar { a: BigRational::zero(), b }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the value lies in Q (no radical component).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Scalar {
        Scalar { a: -self.a.clone(), b: -self.b.clone() }
    }

    /// Galois conjugate a - b*sqrt(d).
    pub fn conjugate(&self) -> Scalar {
        Scalar { a: self.a.clone(), b: -self.b.clone() }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        Scalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        Scalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }

    /// Product. Needs the context only when both operands carry a radical part.
    pub fn mul(&self, rhs: &Scalar, ctx: &FieldCtx) -> Scalar {
        if self.b.is_zero() {
            return Scalar { a: &self.a * &rhs.a, b: &self.a * &rhs.b };
        }
        if rhs.b.is_zero() {
            return Scalar { a: &self.a * &rhs.a, b: &self.b * &rhs.a };
        }
        let d = ctx
            .d()
            .expect("radical scalars outside a quadratic context");
        let d = BigRational::from_integer(d.clone());
        Scalar {
            a: &self.a * &rhs.a + &(&self.b * &rhs.b) * &d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }

    /// Field norm a^2 - d*b^2; zero exactly when the scalar is zero
    /// (d squarefree, not a square).
    pub fn norm(&self, ctx: &FieldCtx) -> BigRational {
        if self.b.is_zero() {
            return &self.a * &self.a;
        }
        let d = ctx
            .d()
            .expect("radical scalars outside a quadratic context");
        &self.a * &self.a - &(&self.b * &self.b) * &BigRational::from_integer(d.clone())
    }

    pub fn inv(&self, ctx: &FieldCtx) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(Scalar { a: self.a.recip(), b: BigRational::zero() });
        }
        let n = self.norm(ctx);
        debug_assert!(!n.is_zero());
        Ok(Scalar { a: &self.a / &n, b: -(&self.b / &n) })
    }

    pub fn div(&self, rhs: &Scalar, ctx: &FieldCtx) -> Result<Scalar> {
        Ok(self.mul(&rhs.inv(ctx)?, ctx))
    }

    pub fn pow(&self, e: u32, ctx: &FieldCtx) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc.mul(self, ctx);
        }
        acc
    }

    /// Sign key used for canonical normalization: the sign of the rational
    /// part if nonzero, else of the radical part.
    pub fn sign_key(&self) -> i8 {
        let lead = if self.a.is_zero() { &self.b } else { &self.a };
        if lead.is_positive() {
            1
        } else if lead.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Render against a context (needed for the sqrt(d) literal).
    pub fn display(&self, ctx: &FieldCtx) -> String {
        if self.b.is_zero() {
            return fmt_rational(&self.a);
        }
        let d = ctx.d().map(|d| d.to_string()).unwrap_or_else(|| "?".into());
        let rad = if self.b.is_one() {
            format!("sqrt({d})")
        } else if (-&self.b).is_one() {
            format!("-sqrt({d})")
        } else {
            format!("{}*sqrt({d})", fmt_rational(&self.b))
        };
        if self.a.is_zero() {
            rad
        } else if rad.starts_with('-') {
            format!("{} - {}", fmt_rational(&self.a), &rad[1..])
        } else {
            format!("{} + {}", fmt_rational(&self.a), rad)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_rational(&self.a))
        } else {
            write!(f, "{} + {}*rad", fmt_rational(&self.a), fmt_rational(&self.b))
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Outcome of a square-root attempt inside the current field tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SqrtOutcome {
    /// s with s^2 = r, expressible in the current field.
    Found(Scalar),
    /// The root needs Q(sqrt(d)) for this squarefree d.
    NeedsExtension(BigInt),
}

/// Exact square root of a rational inside Q or the context's Q(sqrt(d)).
///
/// Writes r = (v/q)^2 * w with w squarefree; w = 1 gives a rational root,
/// w = d gives (v/q)*sqrt(d), anything else asks for a new extension.
pub fn try_sqrt(r: &BigRational, ctx: &FieldCtx) -> SqrtOutcome {
    if r.is_zero() {
        return SqrtOutcome::Found(Scalar::zero());
    }
    // sqrt(p/q) = sqrt(p*q)/q with p*q = v^2 * w, w squarefree.
    let u = r.numer() * r.denom();
    let (v, w) = squarefree_decompose(&u);
    let root = BigRational::new(v, r.denom().clone());
    if w.is_one() {
        return SqrtOutcome::Found(Scalar::from_rational(root));
    }
    match ctx.d() {
        Some(d) if *d == w => SqrtOutcome::Found(Scalar::sqrt_d(root)),
        _ => SqrtOutcome::NeedsExtension(w),
    }
}

/// Square root of an arbitrary field element inside the same field, when it
/// exists. For a + b*sqrt(d) with b != 0 the ansatz (u + v*sqrt(d))^2 reduces
/// to rational square roots of the norm and of (a +- sqrt(norm))/2.
pub fn scalar_sqrt(s: &Scalar, ctx: &FieldCtx) -> Option<Scalar> {
    if s.is_zero() {
        return Some(Scalar::zero());
    }
    if let Some(r) = s.as_rational() {
        return match try_sqrt(r, ctx) {
            SqrtOutcome::Found(x) => Some(x),
            SqrtOutcome::NeedsExtension(_) => None,
        };
    }
    let n = s.norm(ctx);
    let SqrtOutcome::Found(root_n) = try_sqrt(&n, ctx) else {
        return None;
    };
    let root_n = root_n.as_rational()?.clone();
    let two = BigRational::from_integer(2.into());
    for sign in [1, -1] {
        let u2 = (s.rational_part() + if sign > 0 { root_n.clone() } else { -root_n.clone() }) / &two;
        if let SqrtOutcome::Found(u) = try_sqrt(&u2, ctx) {
            if let Some(u) = u.as_rational() {
                if u.is_zero() {
                    continue;
                }
                let v = s.radical_part() / (u * &two);
                let cand = Scalar::quadratic(u.clone(), v);
                if cand.mul(&cand, ctx) == *s {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// n = v^2 * w with w squarefree (w carries the sign of n). Trial division
/// up to a fixed bound; the undivided cofactor is tested for being a perfect
/// square, otherwise treated as squarefree. Exact for |cofactor| < bound^3,
/// which covers every value the kernel meets at desk scale.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let negative = n.is_negative();
    let mut m = n.abs();
    let mut v = BigInt::one();
    let mut w = BigInt::one();
    let bound: u64 = 100_000;
    let mut p: u64 = 2;
    while p <= bound {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        if (&m % &pb).is_zero() {
            let mut e = 0u32;
            while (&m % &pb).is_zero() {
                m /= &pb;
                e += 1;
            }
            for _ in 0..(e / 2) {
                v *= &pb;
            }
            if e % 2 == 1 {
                w *= &pb;
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if !m.is_one() {
        let s = m.sqrt();
        if &s * &s == m {
            v *= s;
        } else {
            w *= m;
        }
    }
    if negative {
        w = -w;
    }
    (v, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q2() -> FieldCtx {
        FieldCtx::quadratic(2).unwrap()
    }

    fn qi() -> FieldCtx {
        FieldCtx::quadratic(-1).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        // (1 + sqrt2)(1 - sqrt2) = -1
        let ctx = q2();
        let x = Scalar::quadratic(BigRational::one(), BigRational::one());
        let y = x.conjugate();
        assert_eq!(x.mul(&y, &ctx), Scalar::from_int(-1));
    }

    #[test]
    fn inverse_of_imaginary_unit() {
        // 1/I = -I with d = -1
        let ctx = qi();
        let i = Scalar::sqrt_d(BigRational::one());
        assert_eq!(i.inv(&ctx).unwrap(), i.neg());
    }

    #[test]
    fn rational_addition() {
        let ctx = FieldCtx::rational();
        let x = Scalar::from_frac(2, 3).add(&Scalar::from_frac(1, 6));
        assert_eq!(x, Scalar::from_frac(5, 6));
        let _ = ctx;
    }

    #[test]
    fn sqrt_of_perfect_square() {
        let out = try_sqrt(&BigRational::from_integer(4.into()), &FieldCtx::rational());
        assert_eq!(out, SqrtOutcome::Found(Scalar::from_int(2)));
    }

    #[test]
    fn sqrt_two_in_context() {
        let out = try_sqrt(&BigRational::from_integer(2.into()), &q2());
        assert_eq!(out, SqrtOutcome::Found(Scalar::sqrt_d(BigRational::one())));
    }

    #[test]
    fn sqrt_three_needs_new_extension() {
        let out = try_sqrt(&BigRational::from_integer(3.into()), &q2());
        assert_eq!(out, SqrtOutcome::NeedsExtension(3.into()));
    }

    #[test]
    fn sqrt_pulls_out_square_part() {
        // sqrt(8) = 2*sqrt(2)
        let out = try_sqrt(&BigRational::from_integer(8.into()), &q2());
        assert_eq!(out, SqrtOutcome::Found(Scalar::sqrt_d(BigRational::from_integer(2.into()))));
        // sqrt(-4) = 2*I
        let out = try_sqrt(&BigRational::from_integer((-4).into()), &qi());
        assert_eq!(out, SqrtOutcome::Found(Scalar::sqrt_d(BigRational::from_integer(2.into()))));
    }

    #[test]
    fn field_tower_rejected() {
        let mut ctx = q2();
        let err = ctx.adopt(&BigInt::from(3)).unwrap_err();
        assert!(matches!(err, Error::FieldTowerExceeded { .. }));
    }

    fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
        let num = rng.random_range(-20i64..=20);
        let den = rng.random_range(1i64..=9);
        let bn = rng.random_range(-20i64..=20);
        let bd = rng.random_range(1i64..=9);
        Scalar::quadratic(BigRational::new(num.into(), den.into()), BigRational::new(bn.into(), bd.into()))
    }

    #[test]
    fn field_axioms_on_seeded_samples() {
        let ctx = q2();
        let mut rng = ChaCha8Rng::seed_from_u64(0xF1E1D);
        for _ in 0..1000 {
            let x = random_scalar(&mut rng);
            let y = random_scalar(&mut rng);
            let z = random_scalar(&mut rng);
            // associativity
            assert_eq!(x.mul(&y, &ctx).mul(&z, &ctx), x.mul(&y.mul(&z, &ctx), &ctx));
            assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            // distributivity
            assert_eq!(x.mul(&y.add(&z), &ctx), x.mul(&y, &ctx).add(&x.mul(&z, &ctx)));
            // inverses
            if !x.is_zero() {
                assert!(x.mul(&x.inv(&ctx).unwrap(), &ctx).is_one());
            }
        }
    }
}
