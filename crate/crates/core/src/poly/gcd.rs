//! Multivariate gcd (subresultant PRS with content stripping), content /
//! primitive part, and squarefree part.

use super::{MultiPoly, Var};
use crate::error::{Error, Result};
use crate::scalar::FieldCtx;

/// Pseudo-remainder of `a` by `b` w.r.t. `v`, normalized so that it equals
/// lc(b)^(deg a - deg b + 1) * a mod b.
pub fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: Var, ctx: &FieldCtx) -> MultiPoly {
    let db = b.degree_in(v);
    debug_assert!(db > 0 || !b.is_zero());
    let lcb = b.leading_coeff_in(v);
    let da = a.degree_in(v);
    if a.is_zero() || da < db {
        // still scale to the standard normalization
        let e = da as i64 - db as i64 + 1;
        if e <= 0 {
            return a.clone();
        }
    }
    let mut r = a.clone();
    let mut e: i64 = da as i64 - db as i64 + 1;
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.leading_coeff_in(v);
        let shift = MultiPoly::var_pow(v, dr - db);
        r = r.mul(&lcb, ctx).sub(&b.mul(&lr, ctx).mul(&shift, ctx));
        e -= 1;
        debug_assert!(r.is_zero() || r.degree_in(v) < dr);
    }
    for _ in 0..e.max(0) {
        r = r.mul(&lcb, ctx);
    }
    r
}

/// Gcd of all coefficients of `p` w.r.t. the variable set `vars`, and the
/// primitive cofactor: p = content * pp. When no variable of `vars` occurs,
/// the convention is content = p, pp = 1, so that primitive parts of
/// constant-in-`vars` polynomials are trivial.
pub fn content_pp(p: &MultiPoly, vars: &[Var], ctx: &FieldCtx) -> (MultiPoly, MultiPoly) {
    if p.is_zero() {
        return (MultiPoly::zero(), MultiPoly::one());
    }
    if !vars.iter().any(|&v| p.contains_var(v)) {
        return (p.clone(), MultiPoly::one());
    }
    // group terms by the exponents of `vars`
    let mut groups: std::collections::BTreeMap<super::Mono, MultiPoly> = Default::default();
    for (m, c) in p.terms() {
        let mut key = super::Mono::unit();
        let mut rest = *m;
        for &v in vars {
            key.0[v as usize] = m.exp(v);
            rest.0[v as usize] = 0;
        }
        groups
            .entry(key)
            .or_insert_with(MultiPoly::zero)
            .add_term_pub(rest, c.clone());
    }
    let coeffs: Vec<MultiPoly> = groups.into_values().collect();
    let content = gcd_many(&coeffs, ctx);
    let pp = p.exact_div(&content, ctx).expect("content divides");
    (content, pp)
}

impl MultiPoly {
    pub(crate) fn add_term_pub(&mut self, m: super::Mono, c: crate::scalar::Scalar) {
        let tmp = MultiPoly::monomial(c, m);
        *self = self.add(&tmp);
    }
}

/// Content w.r.t. a single variable's coefficients.
pub fn content_in(p: &MultiPoly, v: Var, ctx: &FieldCtx) -> MultiPoly {
    content_pp(p, &[v], ctx).0
}

pub fn primitive_part_in(p: &MultiPoly, v: Var, ctx: &FieldCtx) -> MultiPoly {
    content_pp(p, &[v], ctx).1
}

/// Greatest common divisor, primitive and canonically normalized.
pub fn gcd(p: &MultiPoly, q: &MultiPoly, ctx: &FieldCtx) -> MultiPoly {
    if p.is_zero() {
        return q.canonical(ctx);
    }
    if q.is_zero() {
        return p.canonical(ctx);
    }
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one();
    }
    // main variable: first registry variable occurring in both
    let common: Vec<Var> = p
        .vars_present()
        .into_iter()
        .filter(|v| q.contains_var(*v))
        .collect();
    let Some(&v) = common.first() else {
        return MultiPoly::one();
    };
    let (cont_p, pp_p) = content_pp(p, &[v], ctx);
    let (cont_q, pp_q) = content_pp(q, &[v], ctx);
    let cont_gcd = gcd(&cont_p, &cont_q, ctx);
    let prs = subres_prs_gcd(&pp_p, &pp_q, v, ctx);
    cont_gcd.mul(&prs, ctx).canonical(ctx)
}

fn subres_prs_gcd(p: &MultiPoly, q: &MultiPoly, v: Var, ctx: &FieldCtx) -> MultiPoly {
    let (mut a, mut b) = if p.degree_in(v) >= q.degree_in(v) {
        (p.clone(), q.clone())
    } else {
        (q.clone(), p.clone())
    };
    if b.degree_in(v) == 0 {
        // a is v-primitive, so a v-free common divisor is constant
        return MultiPoly::one();
    }
    let mut g = MultiPoly::one();
    let mut h = MultiPoly::one();
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = pseudo_rem(&a, &b, v, ctx);
        if r.is_zero() {
            return primitive_part_in(&b, v, ctx);
        }
        if r.degree_in(v) == 0 {
            return MultiPoly::one();
        }
        a = std::mem::replace(&mut b, {
            let mut div = g.clone();
            for _ in 0..delta {
                div = div.mul(&h, ctx);
            }
            r.exact_div(&div, ctx).expect("subresultant division is exact")
        });
        g = a.leading_coeff_in(v);
        h = if delta == 0 {
            h
        } else {
            let gp = g.pow(delta as u32, ctx);
            if delta == 1 {
                gp
            } else {
                gp.exact_div(&h.pow(delta as u32 - 1, ctx), ctx)
                    .expect("subresultant h update is exact")
            }
        };
    }
}

/// Gcd of a list (zero entries skipped); canonical output.
pub fn gcd_many(polys: &[MultiPoly], ctx: &FieldCtx) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = gcd(&acc, p, ctx);
        if acc.is_constant() && !acc.is_zero() {
            return MultiPoly::one();
        }
    }
    acc
}

/// Product of the distinct irreducible factors of `p`, each with
/// multiplicity one; canonically normalized.
pub fn squarefree_part(p: &MultiPoly, ctx: &FieldCtx) -> Result<MultiPoly> {
    if p.is_zero() {
        return Err(Error::Structural("squarefree part of zero".into()));
    }
    if p.is_constant() {
        return Ok(MultiPoly::one());
    }
    let mut g = p.clone();
    for v in p.vars_present() {
        let dp = p.derivative(v);
        g = gcd(&g, &dp, ctx);
        if g.is_constant() {
            break;
        }
    }
    let sf = p.exact_div(&g, ctx)?;
    Ok(sf.canonical(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c() -> FieldCtx {
        FieldCtx::rational()
    }

    fn x(v: Var) -> MultiPoly {
        MultiPoly::var(v)
    }

    #[test]
    fn univariate_gcd() {
        // gcd(x^2-1, x-1) = x-1
        let p = x(Var::X1).pow(2, &c()).sub(&MultiPoly::one());
        let q = x(Var::X1).sub(&MultiPoly::one());
        assert_eq!(gcd(&p, &q, &c()), q.canonical(&c()));
    }

    #[test]
    fn example1_h_polys_are_coprime() {
        // h1 = 2*x2*x3^2 + 4*x3*x1 - 2*x2, h2 = x1^2x3^2+x2^2x3^2+x3^2+x1^2+x2^2+1
        let ctx = c();
        let two = MultiPoly::from_int(2);
        let four = MultiPoly::from_int(4);
        let h1 = two
            .mul(&x(Var::X2), &ctx)
            .mul(&x(Var::X3).pow(2, &ctx), &ctx)
            .add(&four.mul(&x(Var::X3), &ctx).mul(&x(Var::X1), &ctx))
            .sub(&two.mul(&x(Var::X2), &ctx));
        let h2 = x(Var::X1)
            .pow(2, &ctx)
            .mul(&x(Var::X3).pow(2, &ctx), &ctx)
            .add(&x(Var::X2).pow(2, &ctx).mul(&x(Var::X3).pow(2, &ctx), &ctx))
            .add(&x(Var::X3).pow(2, &ctx))
            .add(&x(Var::X1).pow(2, &ctx))
            .add(&x(Var::X2).pow(2, &ctx))
            .add(&MultiPoly::one());
        assert_eq!(gcd(&h1, &h2, &ctx), MultiPoly::one());
    }

    #[test]
    fn gcd_with_quadratic_coefficient_vars() {
        // gcd(t1^2 - h1^2, t1^3 - h1^3) = t1 - h1
        let ctx = c();
        let p = x(Var::T1).pow(2, &ctx).sub(&x(Var::H1).pow(2, &ctx));
        let q = x(Var::T1).pow(3, &ctx).sub(&x(Var::H1).pow(3, &ctx));
        let g = gcd(&p, &q, &ctx);
        let expect = x(Var::T1).sub(&x(Var::H1)).canonical(&ctx);
        assert_eq!(g, expect);
    }

    #[test]
    fn content_of_simple_poly() {
        // content_{t2}(x1*t2 + x1*t2^2) = x1
        let ctx = c();
        let p = x(Var::X1)
            .mul(&x(Var::T2), &ctx)
            .add(&x(Var::X1).mul(&x(Var::T2).pow(2, &ctx), &ctx));
        let (cont, pp) = content_pp(&p, &[Var::T2], &ctx);
        assert_eq!(cont, x(Var::X1));
        assert_eq!(cont.mul(&pp, &ctx), p);
    }

    #[test]
    fn content_orientation_without_occurrence() {
        // content_{Z,W} of a Z,W-free polynomial is the polynomial; pp = 1
        let ctx = c();
        let p = x(Var::X1).add(&MultiPoly::one());
        let (cont, pp) = content_pp(&p, &[Var::Z, Var::W], &ctx);
        assert_eq!(cont, p);
        assert_eq!(pp, MultiPoly::one());
    }

    #[test]
    fn squarefree_part_examples() {
        let ctx = c();
        // (x-1)^2 (x+2) -> (x-1)(x+2)
        let a = x(Var::X1).sub(&MultiPoly::one());
        let b = x(Var::X1).add(&MultiPoly::from_int(2));
        let p = a.pow(2, &ctx).mul(&b, &ctx);
        let sf = squarefree_part(&p, &ctx).unwrap();
        assert_eq!(sf, a.mul(&b, &ctx).canonical(&ctx));
        // x1^2 x2 -> x1 x2
        let p = x(Var::X1).pow(2, &ctx).mul(&x(Var::X2), &ctx);
        assert_eq!(
            squarefree_part(&p, &ctx).unwrap(),
            x(Var::X1).mul(&x(Var::X2), &ctx).canonical(&ctx)
        );
    }

    #[test]
    fn squarefree_reconstruction_property() {
        // squarefree_part(p) * gcd(p, all partials) == p up to constant
        let ctx = c();
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..40 {
            // build p as a product of small factors with multiplicities
            let f1 = super::super::tests::random_poly(&mut rng, &[Var::X1, Var::X2], 2, 3);
            let f2 = super::super::tests::random_poly(&mut rng, &[Var::X1, Var::X2], 1, 2);
            if f1.is_zero() || f2.is_zero() || f1.is_constant() || f2.is_constant() {
                continue;
            }
            let e1 = rng.random_range(1..=2);
            let e2 = rng.random_range(1..=2);
            let p = f1.pow(e1, &ctx).mul(&f2.pow(e2, &ctx), &ctx);
            let sf = squarefree_part(&p, &ctx).unwrap();
            let mut g = p.clone();
            for v in p.vars_present() {
                g = gcd(&g, &p.derivative(v), &ctx);
            }
            let recon = sf.mul(&g, &ctx);
            assert!(recon.eq_up_to_constant(&p, &ctx));
        }
    }
}
