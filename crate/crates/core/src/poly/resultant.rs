//! Sylvester resultants: fraction-free (Bareiss) elimination for small
//! matrices, subresultant PRS above that.

use super::gcd::pseudo_rem;
use super::{MultiPoly, Var};
use crate::error::{Error, Result};
use crate::scalar::FieldCtx;

const BAREISS_LIMIT: u16 = 12;

/// Sylvester resultant of `p` and `q` w.r.t. `v`. Both operands must have
/// positive degree in `v`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, v: Var, ctx: &FieldCtx) -> Result<MultiPoly> {
    if p.degree_in(v) == 0 || q.degree_in(v) == 0 {
        return Err(Error::DegreeZeroOperand);
    }
    Ok(resultant_total(p, q, v, ctx))
}

/// Total version used inside elimination pipelines: degree-zero operands get
/// the usual power convention, zero polynomials give zero.
pub fn resultant_total(p: &MultiPoly, q: &MultiPoly, v: Var, ctx: &FieldCtx) -> MultiPoly {
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero();
    }
    let m = p.degree_in(v);
    let n = q.degree_in(v);
    if m == 0 && n == 0 {
        return MultiPoly::one();
    }
    if n == 0 {
        return q.pow(m as u32, ctx);
    }
    if m == 0 {
        return p.pow(n as u32, ctx);
    }
    if m + n <= BAREISS_LIMIT {
        sylvester_bareiss(p, q, v, ctx)
    } else {
        prs_resultant(p.clone(), q.clone(), v, ctx, 1, 0, MultiPoly::zero())
            .unwrap_or_else(MultiPoly::zero)
    }
}

fn sylvester_bareiss(p: &MultiPoly, q: &MultiPoly, v: Var, ctx: &FieldCtx) -> MultiPoly {
    let pc = p.coeffs_in(v);
    let qc = q.coeffs_in(v);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let dim = m + n;
    let mut mat = vec![vec![MultiPoly::zero(); dim]; dim];
    for row in 0..n {
        for (k, c) in pc.iter().enumerate() {
            mat[row][row + (m - k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in qc.iter().enumerate() {
            mat[n + row][row + (n - k)] = c.clone();
        }
    }
    // fraction-free elimination
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..dim - 1 {
        if mat[k][k].is_zero() {
            let Some(r) = (k + 1..dim).find(|&r| !mat[r][k].is_zero()) else {
                return MultiPoly::zero();
            };
            mat.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..dim {
            for j in k + 1..dim {
                let t = mat[k][k]
                    .mul(&mat[i][j], ctx)
                    .sub(&mat[i][k].mul(&mat[k][j], ctx));
                mat[i][j] = t.exact_div(&prev, ctx).expect("bareiss division is exact");
            }
            mat[i][k] = MultiPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[dim - 1][dim - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Subresultant PRS resultant, returning None when the resultant is zero.
fn prs_resultant(
    u: MultiPoly,
    w: MultiPoly,
    v: Var,
    ctx: &FieldCtx,
    i: usize,
    delta_p: usize,
    psi_p: MultiPoly,
) -> Option<MultiPoly> {
    let m = u.degree_in(v) as usize;
    let n = w.degree_in(v) as usize;
    if m < n {
        let r = prs_resultant(w, u, v, ctx, i, delta_p, psi_p)?;
        return Some(if m % 2 == 1 && n % 2 == 1 { r.neg() } else { r });
    }
    if n == 0 {
        return Some(w.pow(m as u32, ctx));
    }
    let r = pseudo_rem(&u, &w, v, ctx);
    if r.is_zero() {
        return None;
    }
    let delta = m + 1 - n;
    let (psi, beta) = if i == 1 {
        let one = MultiPoly::one();
        (
            one.neg(),
            if delta % 2 == 1 { one.neg() } else { one },
        )
    } else {
        let f = u.leading_coeff_in(v);
        let psi = match delta_p {
            0 => unreachable!("delta_p set after first step"),
            1 => psi_p,
            _ => f
                .neg()
                .pow(delta_p as u32 - 1, ctx)
                .exact_div(&psi_p.pow(delta_p as u32 - 2, ctx), ctx)
                .expect("psi update divides"),
        };
        let beta = f.neg().mul(&psi.pow(delta as u32 - 1, ctx), ctx);
        (psi, beta)
    };
    let r = r.exact_div(&beta, ctx).expect("PRS beta divides");
    let l = w.leading_coeff_in(v);
    let s = r.degree_in(v) as usize;
    let mut acc = beta.pow(n as u32, ctx);
    if m % 2 == 1 && n % 2 == 1 {
        acc = acc.neg();
    }
    let rec = prs_resultant(w, r, v, ctx, i + 1, delta, psi)?;
    acc = acc.mul(&rec, ctx);
    let k = n * delta + s - m;
    let f = l.pow(k as u32, ctx);
    Some(acc.exact_div(&f, ctx).expect("lc power divides"))
}

#[cfg(test)]
mod tests {
    use super::super::gcd::gcd;
    use super::*;
    use crate::scalar::Scalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c() -> FieldCtx {
        FieldCtx::rational()
    }

    #[test]
    fn linear_resultant_is_difference() {
        // Res_x(x - a, x - b) = b - a (a = h1, b = h2)
        let ctx = c();
        let p = MultiPoly::var(Var::X1).sub(&MultiPoly::var(Var::H1));
        let q = MultiPoly::var(Var::X1).sub(&MultiPoly::var(Var::H2));
        let r = resultant(&p, &q, Var::X1, &ctx).unwrap();
        let expect = MultiPoly::var(Var::H2).sub(&MultiPoly::var(Var::H1));
        assert!(r == expect || r == expect.neg());
    }

    #[test]
    fn cuspidal_resultant() {
        // Res_t(t^2 - x1, t^3 - x2) = x2^2 - x1^3 up to sign
        let ctx = c();
        let p = MultiPoly::var_pow(Var::T1, 2).sub(&MultiPoly::var(Var::X1));
        let q = MultiPoly::var_pow(Var::T1, 3).sub(&MultiPoly::var(Var::X2));
        let r = resultant(&p, &q, Var::T1, &ctx).unwrap();
        let expect = MultiPoly::var_pow(Var::X2, 2).sub(&MultiPoly::var_pow(Var::X1, 3));
        assert!(r == expect || r == expect.neg());
    }

    #[test]
    fn degree_zero_operand_rejected() {
        let ctx = c();
        let p = MultiPoly::var(Var::X1);
        let q = MultiPoly::var(Var::X2);
        assert!(matches!(resultant(&p, &q, Var::X1, &ctx), Err(Error::DegreeZeroOperand)));
    }

    #[test]
    fn resultant_vanishes_iff_common_factor() {
        let ctx = c();
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
        let vars = [Var::X1, Var::X2];
        for _ in 0..200 {
            let p = super::super::tests::random_poly(&mut rng, &vars, 3, 3);
            let q = super::super::tests::random_poly(&mut rng, &vars, 3, 3);
            if p.degree_in(Var::X1) == 0 || q.degree_in(Var::X1) == 0 {
                continue;
            }
            let r = resultant(&p, &q, Var::X1, &ctx).unwrap();
            let g = gcd(&p, &q, &ctx);
            assert_eq!(r.is_zero(), g.degree_in(Var::X1) > 0);
        }
    }

    #[test]
    fn bareiss_and_prs_agree() {
        let ctx = c();
        let mut rng = ChaCha8Rng::seed_from_u64(0xCAFE);
        for _ in 0..60 {
            let p = super::super::tests::random_poly(&mut rng, &[Var::T1, Var::X1], 4, 4);
            let q = super::super::tests::random_poly(&mut rng, &[Var::T1, Var::X1], 4, 4);
            if p.degree_in(Var::T1) == 0 || q.degree_in(Var::T1) == 0 {
                continue;
            }
            let a = sylvester_bareiss(&p, &q, Var::T1, &ctx);
            let b = prs_resultant(p.clone(), q.clone(), Var::T1, &ctx, 1, 0, MultiPoly::zero())
                .unwrap_or_else(MultiPoly::zero);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn resultant_vanishes_at_shared_root() {
        // construct p, q sharing the factor (t1 - x1): resultant must be 0
        let ctx = c();
        let shared = MultiPoly::var(Var::T1).sub(&MultiPoly::var(Var::X1));
        let p = shared.mul(&MultiPoly::var(Var::T1).add(&MultiPoly::from_int(3)), &ctx);
        let q = shared.mul(&MultiPoly::var_pow(Var::T1, 2).add(&MultiPoly::var(Var::X1)), &ctx);
        let r = resultant(&p, &q, Var::T1, &ctx).unwrap();
        assert!(r.is_zero());
        let _ = Scalar::one();
    }
}
