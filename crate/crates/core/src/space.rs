//! Rational space curves given by the t2-coefficients of g: birational
//! projection onto a plane curve, parametrization there, and lifting of the
//! dropped coordinate.

use crate::error::{Error, Result};
use crate::plane::{rationality, CurveVerdict, PlaneCurve};
use crate::poly::factor::{factor_squarefree, FACTOR_BUDGET};
use crate::poly::gcd::{gcd_many, squarefree_part};
use crate::poly::resultant::resultant_total;
use crate::poly::{MultiPoly, Var};
use crate::ratfunc::{numer_of_substitution, RatFunc};
use crate::scalar::FieldCtx;

/// Generators (the nonzero t2-coefficients of g) of the space curve D in
/// the surface coordinates x1, x2, x3.
#[derive(Clone, Debug)]
pub struct SpaceCurveIdeal {
    pub generators: Vec<MultiPoly>,
}

impl SpaceCurveIdeal {
    pub fn new(generators: Vec<MultiPoly>, ctx: &FieldCtx) -> Result<SpaceCurveIdeal> {
        let gens: Vec<MultiPoly> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        if gens.iter().any(|g| g.is_constant()) {
            return Err(Error::Structural("ideal contains a nonzero constant: empty set".into()));
        }
        let mut distinct = gens.clone();
        distinct.dedup_by(|a, b| a == b);
        distinct.sort_by_key(|g| format!("{:?}", g));
        distinct.dedup();
        if distinct.len() < 2 {
            return Err(Error::Structural(
                "space curve needs at least two distinct generators".into(),
            ));
        }
        let common = gcd_many(&gens, ctx);
        if !common.is_constant() {
            return Err(Error::Structural(
                "generators share a factor: the ideal defines a surface, not a curve".into(),
            ));
        }
        Ok(SpaceCurveIdeal { generators: gens })
    }
}

/// Result of a space-curve parametrization attempt.
#[derive(Clone, Debug)]
pub struct SpaceOutcome {
    /// (x1(t1), x2(t1), x3(t1)) with nonconstant third coordinate.
    pub param: Option<[RatFunc; 3]>,
    pub notes: Vec<String>,
}

/// The projections tried, in order: drop x2 onto (x1, x3), then drop x1,
/// then drop x3.
const PROJECTIONS: [(Var, (Var, Var)); 3] = [
    (Var::X2, (Var::X1, Var::X3)),
    (Var::X1, (Var::X2, Var::X3)),
    (Var::X3, (Var::X1, Var::X2)),
];

/// Parametrize the space curve: project out one coordinate by pairwise
/// resultants, parametrize a rational component of the plane image, and lift
/// the dropped coordinate through a factor linear in it. Every output is
/// re-verified against all generators before being returned.
pub fn parametrize_space(ideal: &SpaceCurveIdeal, ctx: &mut FieldCtx) -> Result<SpaceOutcome> {
    let mut notes = Vec::new();
    for (dropped, plane_vars) in PROJECTIONS {
        match project_and_lift(ideal, dropped, plane_vars, ctx, &mut notes)? {
            Some(param) => return Ok(SpaceOutcome { param: Some(param), notes }),
            None => continue,
        }
    }
    Ok(SpaceOutcome { param: None, notes })
}

fn project_and_lift(
    ideal: &SpaceCurveIdeal,
    dropped: Var,
    plane_vars: (Var, Var),
    ctx: &mut FieldCtx,
    notes: &mut Vec<String>,
) -> Result<Option<[RatFunc; 3]>> {
    // elimination outputs: generators free of the dropped variable pass
    // through; pairs with positive degree contribute resultants
    let mut elim: Vec<MultiPoly> = Vec::new();
    let with_var: Vec<&MultiPoly> = ideal
        .generators
        .iter()
        .filter(|g| g.degree_in(dropped) > 0)
        .collect();
    for g in &ideal.generators {
        if g.degree_in(dropped) == 0 {
            elim.push(g.clone());
        }
    }
    for i in 0..with_var.len() {
        for j in i + 1..with_var.len() {
            let r = resultant_total(with_var[i], with_var[j], dropped, ctx);
            if !r.is_zero() {
                elim.push(r);
            }
        }
    }
    if elim.is_empty() {
        notes.push(format!("projection dropping {} has no elimination output", dropped.name()));
        return Ok(None);
    }
    let g = gcd_many(&elim, ctx);
    if g.is_constant() {
        notes.push(format!("projection dropping {} is degenerate", dropped.name()));
        return Ok(None);
    }
    let plane_poly = squarefree_part(&g, ctx)?;
    if plane_poly.total_degree() > FACTOR_BUDGET {
        notes.push(format!(
            "projected curve dropping {} exceeds the factorization budget",
            dropped.name()
        ));
        return Ok(None);
    }

    // components in canonical order; re-factor lazily so that a quadratic
    // extension adopted while handling one component can split later ones
    let mut worklist: Vec<MultiPoly> = factor_squarefree(&plane_poly, ctx)?;
    let mut idx = 0;
    while idx < worklist.len() {
        let comp = worklist[idx].clone();
        let refined = factor_squarefree(&comp, ctx)?;
        if refined.len() > 1 || (refined.len() == 1 && refined[0] != comp) {
            worklist.splice(idx..idx + 1, refined);
            continue;
        }
        idx += 1;
        let curve = PlaneCurve::from_squarefree(comp.clone(), plane_vars);
        let verdict = rationality(&curve, ctx)?;
        let param = match verdict {
            CurveVerdict::Rational(p) => p,
            CurveVerdict::NotRational(_) => {
                notes.push(format!("component {:?} is not rational", comp));
                continue;
            }
            CurveVerdict::Undecided(reason) => {
                notes.push(format!("component {:?} undecided: {reason}", comp));
                continue;
            }
        };
        match lift_component(ideal, dropped, plane_vars, &param.x, &param.y, ctx)? {
            Some(result) => {
                if result[2].is_constant() {
                    notes.push(format!(
                        "component {:?} lifts with constant third coordinate; skipped",
                        comp
                    ));
                    continue;
                }
                return Ok(Some(result));
            }
            None => {
                notes.push(format!("component {:?} has no linear lift", comp));
                continue;
            }
        }
    }
    Ok(None)
}

fn lift_component(
    ideal: &SpaceCurveIdeal,
    dropped: Var,
    plane_vars: (Var, Var),
    px: &RatFunc,
    py: &RatFunc,
    ctx: &mut FieldCtx,
) -> Result<Option<[RatFunc; 3]>> {
    // substitute the plane parametrization into all generators and take the
    // gcd of the numerators: a factor linear in the dropped variable gives
    // the lifted coordinate
    let subs = [(plane_vars.0, px.clone()), (plane_vars.1, py.clone())];
    let mut images = Vec::new();
    for gpoly in &ideal.generators {
        let img = numer_of_substitution(gpoly, &subs, ctx)?;
        if !img.is_zero() {
            images.push(img);
        }
    }
    if images.is_empty() {
        // all generators vanish on the cylinder over the plane curve:
        // the dropped coordinate is unconstrained; not a curve component
        return Ok(None);
    }
    let g = gcd_many(&images, ctx);
    if g.degree_in(dropped) == 0 {
        return Ok(None);
    }
    let sf = squarefree_part(&g, ctx)?;
    let candidates: Vec<MultiPoly> = if sf.total_degree() <= FACTOR_BUDGET {
        factor_squarefree(&sf, ctx)?
    } else {
        vec![sf.clone()]
    };
    for cand in candidates {
        if cand.degree_in(dropped) != 1 {
            continue;
        }
        let coeffs = cand.coeffs_in(dropped);
        let den = coeffs[1].clone();
        let num = coeffs[0].neg();
        let Ok(w) = RatFunc::new(num, den, ctx) else { continue };
        // assemble by coordinate
        let mut coords: [RatFunc; 3] = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
        let order = [Var::X1, Var::X2, Var::X3];
        for (k, v) in order.iter().enumerate() {
            coords[k] = if *v == dropped {
                w.clone()
            } else if *v == plane_vars.0 {
                px.clone()
            } else {
                py.clone()
            };
        }
        // exact verification on every generator
        let subs3 = [
            (Var::X1, coords[0].clone()),
            (Var::X2, coords[1].clone()),
            (Var::X3, coords[2].clone()),
        ];
        let ok = ideal.generators.iter().all(|gpoly| {
            numer_of_substitution(gpoly, &subs3, ctx).map(|n| n.is_zero()).unwrap_or(false)
        });
        if ok {
            return Ok(Some(coords));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::substitute_rational;
    use crate::text::parse_poly;

    fn gens(strs: &[&str], ctx: &mut FieldCtx) -> SpaceCurveIdeal {
        let v: Vec<MultiPoly> = strs.iter().map(|s| parse_poly(s, ctx).unwrap()).collect();
        SpaceCurveIdeal::new(v, ctx).unwrap()
    }

    fn assert_vanishes(ideal: &SpaceCurveIdeal, p: &[RatFunc; 3], ctx: &FieldCtx) {
        let subs = [
            (Var::X1, p[0].clone()),
            (Var::X2, p[1].clone()),
            (Var::X3, p[2].clone()),
        ];
        for g in &ideal.generators {
            let r = substitute_rational(g, &subs, ctx).unwrap();
            assert!(r.is_zero(), "generator {:?} does not vanish", g);
        }
    }

    #[test]
    fn graph_curve() {
        let mut ctx = FieldCtx::rational();
        let ideal = gens(&["x1 - x3", "x2 - x3^2"], &mut ctx);
        let out = parametrize_space(&ideal, &mut ctx).unwrap();
        let p = out.param.expect("graph is parametrizable");
        assert_vanishes(&ideal, &p, &ctx);
        // expected (t, t^2, t): third coordinate equals first
        assert_eq!(p[0], p[2]);
        assert!(!p[2].is_constant());
    }

    #[test]
    fn reducible_component_with_constant_branch_skipped() {
        // from f = x2 - x1^2 + x1 x3: generators x2 - 2x1x3 + x3... the toy
        // ideal {x2 - 2 x1 x3 + x3, x1 - x1^2} splits x1 in {0, 1}
        let mut ctx = FieldCtx::rational();
        let ideal = gens(&["x2 - 2*x1*x3 + x3", "x1 - x1^2"], &mut ctx);
        let out = parametrize_space(&ideal, &mut ctx).unwrap();
        let p = out.param.expect("component with nonconstant x3 exists");
        assert_vanishes(&ideal, &p, &ctx);
        assert!(!p[2].is_constant());
    }

    #[test]
    fn example1_space_curve_over_gaussian_field() {
        // h1, h2 from the sphere pipeline
        let mut ctx = FieldCtx::rational();
        let ideal = gens(
            &[
                "2*x2*x3^2 + 4*x3*x1 - 2*x2",
                "x1^2*x3^2 + x2^2*x3^2 + x3^2 + x1^2 + x2^2 + 1",
            ],
            &mut ctx,
        );
        let out = parametrize_space(&ideal, &mut ctx).unwrap();
        let p = out.param.expect("the sphere's direction curve is rational over Q(i)");
        assert_vanishes(&ideal, &p, &ctx);
        assert_eq!(ctx.d().cloned(), Some(num_bigint::BigInt::from(-1)));
        assert!(!p[2].is_constant());
    }

    #[test]
    fn surface_ideal_rejected() {
        let mut ctx = FieldCtx::rational();
        let g1 = parse_poly("x1*x2 - x1*x3", &mut ctx).unwrap();
        let g2 = parse_poly("x1*x3 - x1", &mut ctx).unwrap();
        assert!(SpaceCurveIdeal::new(vec![g1, g2], &mut ctx).is_err());
        // fewer than two distinct generators
        let g = parse_poly("x1 - x3", &mut ctx).unwrap();
        assert!(SpaceCurveIdeal::new(vec![g.clone(), g], &mut ctx).is_err());
    }

    #[test]
    fn projection_direction_metamorphic() {
        // outputs under different projections parametrize the same curve:
        // cross-verify each output against all generators (done inside) and
        // against each other's plane projections
        let mut ctx = FieldCtx::rational();
        let ideal = gens(&["x1 - x3^2", "x2 - x3^3"], &mut ctx);
        let out = parametrize_space(&ideal, &mut ctx).unwrap();
        let p = out.param.expect("twisted-cubic-like curve");
        assert_vanishes(&ideal, &p, &ctx);
    }
}
