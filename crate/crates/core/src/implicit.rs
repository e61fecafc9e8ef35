//! Decision and parametrization of implicitly given rational ruled surfaces:
//! the space-curve route (algorithm 1) and the plane-curve route through the
//! five content polynomials N1..N5 (algorithm 2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::plane::{rationality, CurveVerdict, GenusCertificate, PlaneCurve, ProperPlaneParam};
use crate::poly::factor::{factor_squarefree, FACTOR_BUDGET};
use crate::poly::gcd::{content_pp, squarefree_part};
use crate::poly::{MultiPoly, Var};
use crate::ratfunc::{numer_of_substitution, substitute_rational, RatFunc};
use crate::scalar::{FieldCtx, Scalar};
use crate::space::{parametrize_space, SpaceCurveIdeal};

/// Surface given implicitly by a squarefree, non-constant polynomial in
/// x1, x2, x3. Irreducibility is an input contract.
#[derive(Clone, Debug)]
pub struct ImplicitSurface {
    pub f: MultiPoly,
}

impl ImplicitSurface {
    pub fn new(f: MultiPoly, ctx: &FieldCtx) -> Result<ImplicitSurface> {
        if f.is_constant() {
            return Err(Error::Structural("surface polynomial must be non-constant".into()));
        }
        for v in f.vars_present() {
            if !matches!(v, Var::X1 | Var::X2 | Var::X3) {
                return Err(Error::Structural(format!(
                    "surface polynomial uses non-coordinate variable {}",
                    v.name()
                )));
            }
        }
        let sf = squarefree_part(&f, ctx)?;
        if !sf.eq_up_to_constant(&f, ctx) {
            return Err(Error::Structural("surface polynomial must be squarefree".into()));
        }
        Ok(ImplicitSurface { f })
    }
}

/// Parametrization in standard reduced form: after placing t2 in the `axis`
/// coordinate, the other two slots (in ascending coordinate order) carry
/// a + t2*b and c + t2*e, all univariate in t1.
#[derive(Clone, Debug)]
pub struct StandardReducedParam {
    pub a: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
    pub e: RatFunc,
    pub axis: usize,
    /// Linear transform A applied to the surface before parametrizing:
    /// the parametrization satisfies f(A x) = 0; A * coords parametrizes f.
    pub undo: Option<[[i64; 3]; 3]>,
}

impl StandardReducedParam {
    /// The three coordinate functions in (t1, t2), axis applied.
    pub fn coords(&self, ctx: &FieldCtx) -> [RatFunc; 3] {
        let t2 = RatFunc::var(Var::T2);
        let first = self.a.add(&t2.mul(&self.b, ctx), ctx);
        let second = self.c.add(&t2.mul(&self.e, ctx), ctx);
        let mut out = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
        let mut rest = [first, second].into_iter();
        for (k, slot) in out.iter_mut().enumerate() {
            if k == self.axis {
                *slot = t2.clone();
            } else {
                *slot = rest.next().expect("two non-axis slots");
            }
        }
        out
    }

    /// Coordinates mapped back through the undo transform (functions of
    /// t1, t2 on the original surface).
    pub fn coords_on_original(&self, ctx: &FieldCtx) -> [RatFunc; 3] {
        let p = self.coords(ctx);
        match &self.undo {
            None => p,
            Some(a) => {
                let mut out = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
                for (i, row) in a.iter().enumerate() {
                    let mut acc = RatFunc::zero();
                    for (j, &aij) in row.iter().enumerate() {
                        acc = acc.add(&p[j].scale(&Scalar::from_int(aij), ctx), ctx);
                    }
                    out[i] = acc;
                }
                out
            }
        }
    }

    /// Structural shape checks: t2-degree at most one per coordinate, axis
    /// coordinate exactly t2, and the surface is two-dimensional.
    pub fn shape_ok(&self, ctx: &FieldCtx) -> bool {
        let coords = self.coords(ctx);
        if coords[self.axis] != RatFunc::var(Var::T2) {
            return false;
        }
        let t2_linear = coords
            .iter()
            .all(|c| c.numer().degree_in(Var::T2) <= 1 && c.denom().degree_in(Var::T2) == 0);
        if !t2_linear {
            return false;
        }
        // not a curve: the directrix pair must not be jointly constant
        let both_dirs_zero = self.b.is_zero() && self.e.is_zero();
        if both_dirs_zero && (self.a.is_constant() && self.c.is_constant()) {
            return false;
        }
        true
    }

    pub fn is_over_rationals(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.e].iter().all(|r| r.is_over_rationals())
    }
}

/// Standard form (m1 + t2 n1, m2 + t2 n2, m3 + t2 n3) with all components
/// univariate in t1.
#[derive(Clone, Debug)]
pub struct StandardFormParam {
    pub m: [RatFunc; 3],
    pub n: [RatFunc; 3],
}

impl StandardFormParam {
    pub fn new(m: [RatFunc; 3], n: [RatFunc; 3]) -> Result<StandardFormParam> {
        if n.iter().all(|ni| ni.is_zero()) {
            return Err(Error::Structural(
                "all direction components vanish: the image is a space curve".into(),
            ));
        }
        Ok(StandardFormParam { m, n })
    }

    pub fn coords(&self, ctx: &FieldCtx) -> [RatFunc; 3] {
        let t2 = RatFunc::var(Var::T2);
        [
            self.m[0].add(&t2.mul(&self.n[0], ctx), ctx),
            self.m[1].add(&t2.mul(&self.n[1], ctx), ctx),
            self.m[2].add(&t2.mul(&self.n[2], ctx), ctx),
        ]
    }
}

/// Verdict of the ruled-surface decision procedures.
#[derive(Clone, Debug)]
pub enum RuledVerdict {
    Parametrized(Box<StandardReducedParam>),
    NotRuled(Vec<SectionCertificate>),
    Undecided(String),
}

/// A section curve component certified non-rational.
#[derive(Clone, Debug)]
pub struct SectionCertificate {
    pub section: &'static str,
    pub component: MultiPoly,
    pub genus: GenusCertificate,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: RuledVerdict,
    pub trace: Vec<String>,
    /// Field the computation ended in.
    pub field: String,
}

// ---------------------------------------------------------------------------
// sections
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Section {
    pub label: &'static str,
    /// Variables of the section plane curve.
    pub vars: (Var, Var),
    /// The coordinate set to zero.
    pub zeroed: Var,
    pub poly: MultiPoly,
    pub is_zero: bool,
}

/// The three coordinate sections f(x1,x2,0), f(0,x2,x3), f(x1,0,x3).
pub fn coordinate_sections(s: &ImplicitSurface, ctx: &FieldCtx) -> [Section; 3] {
    let zero = Scalar::zero();
    let mk = |label, vars, zeroed: Var| {
        let poly = s.f.evaluate_partial(zeroed, &zero, ctx);
        let is_zero = poly.is_zero();
        Section { label, vars, zeroed, poly, is_zero }
    };
    [
        mk("f0_12", (Var::X1, Var::X2), Var::X3),
        mk("f0_23", (Var::X2, Var::X3), Var::X1),
        mk("f0_13", (Var::X1, Var::X3), Var::X2),
    ]
}

/// Squarefree factors of a section in canonical order; errors on budget.
pub fn section_components(poly: &MultiPoly, ctx: &FieldCtx) -> Result<Vec<MultiPoly>> {
    let sf = squarefree_part(poly, ctx)?;
    if sf.total_degree() > FACTOR_BUDGET {
        return Err(Error::FactorBudgetExceeded { degree: sf.total_degree(), budget: FACTOR_BUDGET });
    }
    factor_squarefree(&sf, ctx)
}

// ---------------------------------------------------------------------------
// g construction (algorithm 1)
// ---------------------------------------------------------------------------

/// Which coordinate carries t2 in the reduced form (n3, n1 or n2 variants).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GVariant {
    /// t2 in the third coordinate; sections at x3 = 0.
    N3,
    /// t2 in the first coordinate; sections at x1 = 0.
    N1,
    /// t2 in the second coordinate; sections at x2 = 0.
    N2,
}

impl GVariant {
    pub fn for_section(label: &str) -> GVariant {
        match label {
            "f0_12" => GVariant::N3,
            "f0_23" => GVariant::N1,
            "f0_13" => GVariant::N2,
            _ => unreachable!("unknown section label"),
        }
    }

    fn axis(self) -> usize {
        match self {
            GVariant::N3 => 2,
            GVariant::N1 => 0,
            GVariant::N2 => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GData {
    pub g: MultiPoly,
    /// Multiplicity of the stripped t2 factor.
    pub r: u32,
    /// Nonzero t2-coefficients of g after stripping t2^r.
    pub coeffs: Vec<MultiPoly>,
}

/// Build g = numer(f(p1(x3) + t2 x1, p2(x3) + t2 x2, t2)) (or the n1/n2
/// variants) and apply the structural checks: t2 divides g, no other factor
/// free of x survives, and at least two distinct coefficients remain.
pub fn build_g(
    s: &ImplicitSurface,
    p12: &ProperPlaneParam,
    variant: GVariant,
    ctx: &FieldCtx,
) -> Result<GData> {
    let p1 = ratfunc_in(&p12.x, Var::X3);
    let p2 = ratfunc_in(&p12.y, Var::X3);
    let t2 = RatFunc::var(Var::T2);
    let lin1 = p1.add(&t2.mul(&RatFunc::var(Var::X1), ctx), ctx);
    let lin2 = p2.add(&t2.mul(&RatFunc::var(Var::X2), ctx), ctx);
    let subs: [(Var, RatFunc); 3] = match variant {
        GVariant::N3 => [(Var::X1, lin1), (Var::X2, lin2), (Var::X3, t2)],
        GVariant::N1 => [(Var::X1, t2), (Var::X2, lin1), (Var::X3, lin2)],
        GVariant::N2 => [(Var::X1, lin1), (Var::X2, t2), (Var::X3, lin2)],
    };
    let g = numer_of_substitution(&s.f, &subs, ctx)?;
    if g.is_zero() {
        return Err(Error::Structural("g vanished identically".into()));
    }
    // (a) t2 divides g
    let coeffs_t2 = g.coeffs_in(Var::T2);
    if !coeffs_t2[0].is_zero() {
        return Err(Error::Structural(
            "t2 does not divide g: the section parametrization is not on the surface".into(),
        ));
    }
    let r = coeffs_t2.iter().take_while(|c| c.is_zero()).count() as u32;
    let stripped = g
        .exact_div(&MultiPoly::var_pow(Var::T2, r as u16), ctx)
        .expect("t2 power divides");
    // (b) the only factor free of x1,x2,x3 is a t2 power
    let (content, _) = content_pp(&stripped, &[Var::X1, Var::X2, Var::X3], ctx);
    if !content.is_constant() {
        return Err(Error::Structural(
            "g has a factor constant in x: the surface is a plane x3 - c".into(),
        ));
    }
    // (c) at least two distinct coefficients
    let coeffs: Vec<MultiPoly> = stripped
        .coeffs_in(Var::T2)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    let mut distinct = coeffs.clone();
    distinct.sort_by_key(|c| format!("{:?}", c));
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Structural(
            "degenerate g: fewer than two distinct t2-coefficients".into(),
        ));
    }
    Ok(GData { g, r, coeffs })
}

/// View a univariate rational function of t1 as a function of another
/// variable.
fn ratfunc_in(r: &RatFunc, v: Var) -> RatFunc {
    r.rename_var(Var::T1, v)
}

// ---------------------------------------------------------------------------
// linear transforms
// ---------------------------------------------------------------------------

/// Seeded invertible integer matrix with entries in [-3, 3]; entry (i, j)
/// scales the j-th new coordinate's contribution to old coordinate i.
pub fn with_random_linear_transform(
    s: &ImplicitSurface,
    seed: u64,
    attempt: u32,
    ctx: &FieldCtx,
) -> (ImplicitSurface, [[i64; 3]; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    loop {
        let mut a = [[0i64; 3]; 3];
        for row in a.iter_mut() {
            for entry in row.iter_mut() {
                *entry = rng.random_range(-3..=3);
            }
        }
        if det3_int(&a) == 0 {
            continue;
        }
        let subs: Vec<(Var, MultiPoly)> = (0..3)
            .map(|i| {
                let mut acc = MultiPoly::zero();
                for (j, v) in [Var::X1, Var::X2, Var::X3].iter().enumerate() {
                    acc = acc.add(&MultiPoly::var(*v).scale(&Scalar::from_int(a[i][j]), ctx));
                }
                (Var::coord(i + 1), acc)
            })
            .collect();
        let f2 = s.f.substitute(&subs, ctx);
        return (ImplicitSurface { f: f2 }, a);
    }
}

fn det3_int(a: &[[i64; 3]; 3]) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Verify that coords satisfy f exactly.
pub fn satisfies(f: &MultiPoly, coords: &[RatFunc; 3], ctx: &FieldCtx) -> bool {
    let subs = [
        (Var::X1, coords[0].clone()),
        (Var::X2, coords[1].clone()),
        (Var::X3, coords[2].clone()),
    ];
    numer_of_substitution(f, &subs, ctx).map(|n| n.is_zero()).unwrap_or(false)
}

// ---------------------------------------------------------------------------
// planes
// ---------------------------------------------------------------------------

/// Direct reduced-form parametrization of a degree-one surface.
fn parametrize_plane(f: &MultiPoly, ctx: &FieldCtx) -> Result<StandardReducedParam> {
    debug_assert_eq!(f.total_degree(), 1);
    let coeff_of = |v: Var| f.coeff(&crate::poly::Mono::of_var(v, 1));
    let alpha = coeff_of(Var::X1);
    let beta = coeff_of(Var::X2);
    let gamma = coeff_of(Var::X3);
    let delta = f.coeff(&crate::poly::Mono::unit()).neg();
    let t1 = RatFunc::var(Var::T1);
    // choose the axis (the t2 coordinate) and a solvable coordinate
    // among the nonzero coefficients
    let order = [
        (Var::X1, alpha.clone(), 0usize),
        (Var::X2, beta.clone(), 1usize),
        (Var::X3, gamma.clone(), 2usize),
    ];
    let (solve_idx, solve_coef) = order
        .iter()
        .rev()
        .find(|(_, c, _)| !c.is_zero())
        .map(|(_, c, i)| (*i, c.clone()))
        .expect("degree-one polynomial has a nonzero linear coefficient");
    // axis: highest coordinate that is not the solved one
    let axis = (0..3).rev().find(|&i| i != solve_idx).expect("two slots");
    // remaining coordinate gets t1
    let free_idx = (0..3).find(|&i| i != solve_idx && i != axis).expect("one left");
    let coefs = [alpha, beta, gamma];
    let inv = solve_coef.inv(ctx)?;
    // solved = (delta - coef_free * t1 - coef_axis * t2) / solve_coef
    let d_part = RatFunc::constant(delta.mul(&inv, ctx));
    let t1_part = t1.scale(&coefs[free_idx].mul(&inv, ctx).neg(), ctx);
    let a_val = d_part.add(&t1_part, ctx);
    let b_val = RatFunc::constant(coefs[axis].mul(&inv, ctx).neg());
    // assemble a + t2 b / c + t2 e by slot order
    let mut slots: Vec<(usize, RatFunc, RatFunc)> = vec![
        (solve_idx, a_val, b_val),
        (free_idx, RatFunc::var(Var::T1), RatFunc::zero()),
    ];
    slots.sort_by_key(|(i, _, _)| *i);
    let param = StandardReducedParam {
        a: slots[0].1.clone(),
        b: slots[0].2.clone(),
        c: slots[1].1.clone(),
        e: slots[1].2.clone(),
        axis,
        undo: None,
    };
    debug_assert!(satisfies(f, &param.coords(ctx), ctx));
    Ok(param)
}

// ---------------------------------------------------------------------------
// algorithm 1
// ---------------------------------------------------------------------------

const TRANSFORM_BUDGET: u32 = 8;
const TRANSFORM_SEED: u64 = 0x8000_0001;

pub fn algorithm1(s: &ImplicitSurface, ctx: &FieldCtx) -> Result<Outcome> {
    let mut trace = Vec::new();
    if s.f.total_degree() == 1 {
        let mut c = ctx.clone();
        let p = parametrize_plane(&s.f, &mut c)?;
        trace.push("degree-one surface: direct plane parametrization".into());
        return Ok(Outcome {
            verdict: RuledVerdict::Parametrized(Box::new(p)),
            trace,
            field: c.describe(),
        });
    }
    let mut surf = s.clone();
    let mut undo: Option<[[i64; 3]; 3]> = None;
    for attempt in 0..=TRANSFORM_BUDGET {
        if attempt > 0 {
            let (s2, a) = with_random_linear_transform(s, TRANSFORM_SEED, attempt, ctx);
            trace.push(format!("linear transform attempt {attempt}: {:?}", a));
            surf = s2;
            undo = Some(a);
        }
        let sections = coordinate_sections(&surf, ctx);
        let usable: Vec<&Section> = sections
            .iter()
            .filter(|sec| !sec.is_zero && !sec.poly.is_constant())
            .collect();
        if usable.is_empty() {
            trace.push("all sections degenerate".into());
            continue;
        }
        match algorithm1_attempt(&surf, &sections, undo, ctx, &mut trace)? {
            Some(outcome) => return Ok(outcome),
            None => {
                if attempt == 0 {
                    // sections were usable but nothing came of them: a
                    // transform will not create new rational structure
                    break;
                }
            }
        }
    }
    Ok(Outcome {
        verdict: RuledVerdict::Undecided(
            "no section component led to a parametrizable direction curve".into(),
        ),
        trace,
        field: ctx.describe(),
    })
}

fn algorithm1_attempt(
    surf: &ImplicitSurface,
    sections: &[Section; 3],
    undo: Option<[[i64; 3]; 3]>,
    ctx: &FieldCtx,
    trace: &mut Vec<String>,
) -> Result<Option<Outcome>> {
    let mut certificates = Vec::new();
    let mut fully_certified = 0usize;
    let mut any_undecided = false;
    for section in sections {
        if section.is_zero || section.poly.is_constant() {
            // empty section: vacuously certified (no components)
            if section.poly.is_constant() && !section.is_zero {
                fully_certified += 1;
            } else {
                any_undecided = true;
            }
            continue;
        }
        let variant = GVariant::for_section(section.label);
        let mut section_certified = true;
        let components = match section_components(&section.poly, ctx) {
            Ok(c) => c,
            Err(e) => {
                trace.push(format!("{}: {e}", section.label));
                any_undecided = true;
                continue;
            }
        };
        let mut worklist = components;
        let mut idx = 0;
        while idx < worklist.len() {
            let comp = worklist[idx].clone();
            idx += 1;
            // per-attempt field context: adoption only sticks on success
            let mut cctx = ctx.clone();
            let refined = factor_squarefree(&comp, &cctx)?;
            if refined.len() > 1 {
                let at = idx - 1;
                worklist.splice(at..at, refined);
                continue;
            }
            let curve = PlaneCurve::from_squarefree(comp.clone(), section.vars);
            let verdict = rationality(&curve, &mut cctx)?;
            match verdict {
                CurveVerdict::Rational(p12) => {
                    section_certified = false;
                    trace.push(format!("{}: component {:?} rational", section.label, comp));
                    match try_direction_curve(surf, &p12, variant, undo, &mut cctx, trace)? {
                        Some(param) => {
                            return Ok(Some(Outcome {
                                verdict: RuledVerdict::Parametrized(Box::new(param)),
                                trace: std::mem::take(trace),
                                field: cctx.describe(),
                            }));
                        }
                        None => continue,
                    }
                }
                CurveVerdict::NotRational(cert) => {
                    trace.push(format!(
                        "{}: component {:?} not rational (genus {})",
                        section.label, comp, cert.genus
                    ));
                    certificates.push(SectionCertificate {
                        section: section.label,
                        component: comp,
                        genus: cert,
                    });
                }
                CurveVerdict::Undecided(reason) => {
                    section_certified = false;
                    any_undecided = true;
                    trace.push(format!("{}: component {:?} undecided: {reason}", section.label, comp));
                }
            }
        }
        if section_certified {
            fully_certified += 1;
        }
    }
    if fully_certified == 3 && !any_undecided {
        return Ok(Some(Outcome {
            verdict: RuledVerdict::NotRuled(certificates),
            trace: std::mem::take(trace),
            field: ctx.describe(),
        }));
    }
    Ok(None)
}

/// Steps 2-3 of the space-curve route for one rational section component.
fn try_direction_curve(
    surf: &ImplicitSurface,
    p12: &ProperPlaneParam,
    variant: GVariant,
    undo: Option<[[i64; 3]; 3]>,
    ctx: &mut FieldCtx,
    trace: &mut Vec<String>,
) -> Result<Option<StandardReducedParam>> {
    let gdata = match build_g(surf, p12, variant, ctx) {
        Ok(g) => g,
        Err(e) => {
            trace.push(format!("build_g: {e}"));
            return Ok(None);
        }
    };
    trace.push(format!("g built: t2 multiplicity {}, {} coefficients", gdata.r, gdata.coeffs.len()));
    let ideal = match SpaceCurveIdeal::new(gdata.coeffs.clone(), ctx) {
        Ok(i) => i,
        Err(e) => {
            trace.push(format!("direction curve: {e}"));
            return Ok(None);
        }
    };
    let out = parametrize_space(&ideal, ctx)?;
    trace.extend(out.notes.iter().map(|n| format!("direction curve: {n}")));
    let Some([q1, q2, s_coord]) = out.param else {
        return Ok(None);
    };
    // P = (p1(S) + t2 q1, p2(S) + t2 q2, t2) in the variant's axis layout
    let s_t1 = s_coord.clone();
    let a = p12.x.compose_single(Var::T1, &s_t1, ctx)?;
    let c = p12.y.compose_single(Var::T1, &s_t1, ctx)?;
    let param = StandardReducedParam {
        a,
        b: q1,
        c,
        e: q2,
        axis: variant.axis(),
        undo,
    };
    if !satisfies(&surf.f, &param.coords(ctx), ctx) {
        return Err(Error::Structural(
            "internal: assembled parametrization failed exact substitution".into(),
        ));
    }
    if !param.shape_ok(ctx) {
        trace.push("assembled parametrization is degenerate (a curve); skipped".into());
        return Ok(None);
    }
    Ok(Some(param))
}

// ---------------------------------------------------------------------------
// algorithm 2
// ---------------------------------------------------------------------------

pub fn algorithm2(s: &ImplicitSurface, ctx: &FieldCtx) -> Result<Outcome> {
    let mut trace = Vec::new();
    if s.f.total_degree() == 1 {
        let c = ctx.clone();
        let p = parametrize_plane(&s.f, &c)?;
        trace.push("degree-one surface: direct plane parametrization".into());
        return Ok(Outcome {
            verdict: RuledVerdict::Parametrized(Box::new(p)),
            trace,
            field: c.describe(),
        });
    }
    // Step 1: cylinder shortcut when a coordinate is absent
    let missing: Vec<Var> = [Var::X1, Var::X2, Var::X3]
        .into_iter()
        .filter(|v| s.f.degree_in(*v) == 0)
        .collect();
    if !missing.is_empty() {
        return cylinder_shortcut(s, &missing, ctx, trace);
    }
    // Steps 2-8 over section pairs in canonical order
    let sections = coordinate_sections(s, ctx);
    let pair_choices: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    let mut any_undecided = false;
    let mut certificates = Vec::new();
    let mut certified_sections = [false; 3];
    // pre-analyze each section's components once for certification accounting
    let mut rational_any = [false; 3];
    for (k, section) in sections.iter().enumerate() {
        if section.is_zero {
            any_undecided = true;
            trace.push(format!("{}: section vanishes identically", section.label));
            continue;
        }
        if section.poly.is_constant() {
            certified_sections[k] = true; // empty: vacuously no rational component
            continue;
        }
        let mut cctx = ctx.clone();
        match section_components(&section.poly, &cctx) {
            Ok(comps) => {
                let mut all_not_rational = true;
                for comp in comps {
                    let curve = PlaneCurve::from_squarefree(comp.clone(), section.vars);
                    match rationality(&curve, &mut cctx)? {
                        CurveVerdict::Rational(_) => {
                            rational_any[k] = true;
                            all_not_rational = false;
                        }
                        CurveVerdict::NotRational(cert) => {
                            certificates.push(SectionCertificate {
                                section: section.label,
                                component: comp,
                                genus: cert,
                            });
                        }
                        CurveVerdict::Undecided(reason) => {
                            all_not_rational = false;
                            any_undecided = true;
                            trace.push(format!(
                                "{}: component {:?} undecided: {reason}",
                                section.label, comp
                            ));
                        }
                    }
                }
                certified_sections[k] = all_not_rational;
            }
            Err(e) => {
                any_undecided = true;
                trace.push(format!("{}: {e}", section.label));
            }
        }
    }
    for (i, j) in pair_choices {
        if !(rational_any[i] && rational_any[j]) {
            continue;
        }
        trace.push(format!(
            "trying section pair ({}, {})",
            sections[i].label, sections[j].label
        ));
        if let Some(outcome) = algorithm2_pair(s, (i, j), ctx, &mut trace)? {
            return Ok(outcome);
        }
    }
    let certified_count = certified_sections.iter().filter(|&&b| b).count();
    if certified_count >= 2 {
        return Ok(Outcome {
            verdict: RuledVerdict::NotRuled(certificates),
            trace,
            field: ctx.describe(),
        });
    }
    let _ = any_undecided;
    Ok(Outcome {
        verdict: RuledVerdict::Undecided(
            "no branch produced a parametrization and non-rationality is not certified".into(),
        ),
        trace,
        field: ctx.describe(),
    })
}

fn cylinder_shortcut(
    s: &ImplicitSurface,
    missing: &[Var],
    ctx: &FieldCtx,
    mut trace: Vec<String>,
) -> Result<Outcome> {
    let mut cctx = ctx.clone();
    if missing.len() >= 2 {
        // univariate surface polynomial: a bundle of parallel planes
        let present = [Var::X1, Var::X2, Var::X3]
            .into_iter()
            .find(|v| s.f.degree_in(*v) > 0)
            .expect("non-constant");
        let (roots, _) = crate::plane::univariate_roots(&s.f, present, &mut cctx, true)?;
        let Some(root) = roots.first() else {
            return Ok(Outcome {
                verdict: RuledVerdict::Undecided("plane bundle without reachable root".into()),
                trace,
                field: cctx.describe(),
            });
        };
        trace.push("univariate surface: plane".into());
        let idx = present as usize;
        let axis = (0..3).rev().find(|&k| k != idx).expect("slot");
        let mut slots: Vec<(usize, RatFunc, RatFunc)> = vec![
            (idx, RatFunc::constant(root.clone()), RatFunc::zero()),
            ((0..3).find(|&k| k != idx && k != axis).expect("slot"), RatFunc::var(Var::T1), RatFunc::zero()),
        ];
        slots.sort_by_key(|(i, _, _)| *i);
        let param = StandardReducedParam {
            a: slots[0].1.clone(),
            b: slots[0].2.clone(),
            c: slots[1].1.clone(),
            e: slots[1].2.clone(),
            axis,
            undo: None,
        };
        if !satisfies(&s.f, &param.coords(&cctx), &cctx) {
            return Err(Error::Structural("internal: plane parametrization failed".into()));
        }
        return Ok(Outcome {
            verdict: RuledVerdict::Parametrized(Box::new(param)),
            trace,
            field: cctx.describe(),
        });
    }
    let axis_var = missing[0];
    let axis = axis_var as usize;
    let kept: Vec<Var> = [Var::X1, Var::X2, Var::X3].into_iter().filter(|v| *v != axis_var).collect();
    trace.push(format!("cylinder over the {}{} plane", kept[0].name(), kept[1].name()));
    let comps = section_components(&s.f, &cctx)?;
    for comp in comps {
        let curve = PlaneCurve::from_squarefree(comp.clone(), (kept[0], kept[1]));
        match rationality(&curve, &mut cctx)? {
            CurveVerdict::Rational(p) => {
                let mut slots: Vec<(usize, RatFunc, RatFunc)> = vec![
                    (kept[0] as usize, p.x.clone(), RatFunc::zero()),
                    (kept[1] as usize, p.y.clone(), RatFunc::zero()),
                ];
                slots.sort_by_key(|(i, _, _)| *i);
                let param = StandardReducedParam {
                    a: slots[0].1.clone(),
                    b: slots[0].2.clone(),
                    c: slots[1].1.clone(),
                    e: slots[1].2.clone(),
                    axis,
                    undo: None,
                };
                if !satisfies(&s.f, &param.coords(&cctx), &cctx) {
                    return Err(Error::Structural(
                        "internal: cylinder parametrization failed substitution".into(),
                    ));
                }
                return Ok(Outcome {
                    verdict: RuledVerdict::Parametrized(Box::new(param)),
                    trace,
                    field: cctx.describe(),
                });
            }
            CurveVerdict::NotRational(cert) => {
                trace.push(format!("cylinder base component {:?}: genus {}", comp, cert.genus));
                certificates_push_cylinder(&mut trace, &cert);
                // a cylinder over a non-rational curve is not a rational
                // ruled surface; keep scanning other components
                continue;
            }
            CurveVerdict::Undecided(reason) => {
                trace.push(format!("cylinder base component {:?} undecided: {reason}", comp));
                continue;
            }
        }
    }
    Ok(Outcome {
        verdict: RuledVerdict::Undecided("cylinder base curve not parametrized".into()),
        trace,
        field: cctx.describe(),
    })
}

fn certificates_push_cylinder(trace: &mut Vec<String>, cert: &GenusCertificate) {
    trace.push(format!("genus certificate: degree {} genus {}", cert.degree, cert.genus));
}

/// Run steps 3-8 for one ordered pair of sections, realized by permuting the
/// surface coordinates into the canonical (f0_12, f0_23) configuration.
fn algorithm2_pair(
    s: &ImplicitSurface,
    pair: (usize, usize),
    ctx: &FieldCtx,
    trace: &mut Vec<String>,
) -> Result<Option<Outcome>> {
    // permutation sigma with f'(x) = f(sigma(x)); outputs map back by sigma
    let (perm, slot_of): ([Var; 3], [usize; 3]) = match pair {
        // f' coordinates are (x1', x2', x3'); old x_i = perm[i] evaluated at x'
        (0, 1) => ([Var::X1, Var::X2, Var::X3], [0, 1, 2]),
        // pair (f0_12, f0_13): swap x1 <-> x2
        (0, 2) => ([Var::X2, Var::X1, Var::X3], [1, 0, 2]),
        // pair (f0_23, f0_13): old (x1,x2,x3) = (x3', x1', x2')
        (1, 2) => ([Var::X3, Var::X1, Var::X2], [1, 2, 0]),
        _ => unreachable!(),
    };
    let subs: Vec<(Var, MultiPoly)> = (0..3)
        .map(|i| (Var::coord(i + 1), MultiPoly::var(perm[i])))
        .collect();
    let fp = s.f.substitute(&subs, ctx);
    let sp = ImplicitSurface { f: fp };
    let result = algorithm2_canonical_pair(&sp, ctx, trace)?;
    let Some((coords_p, cctx)) = result else { return Ok(None) };
    // map back: old coordinate i = coords_p[slot_of[i]]
    let coords = [
        coords_p[slot_of[0]].clone(),
        coords_p[slot_of[1]].clone(),
        coords_p[slot_of[2]].clone(),
    ];
    if !satisfies(&s.f, &coords, &cctx) {
        return Err(Error::Structural(
            "internal: permuted parametrization failed on the original surface".into(),
        ));
    }
    let param = reduced_from_coords(&coords, &cctx)?;
    Ok(Some(Outcome {
        verdict: RuledVerdict::Parametrized(Box::new(param)),
        trace: std::mem::take(trace),
        field: cctx.describe(),
    }))
}

/// Recover the (a, b, c, e, axis) encoding from explicit t2-linear coords.
fn reduced_from_coords(coords: &[RatFunc; 3], ctx: &FieldCtx) -> Result<StandardReducedParam> {
    let t2 = RatFunc::var(Var::T2);
    let axis = (0..3)
        .find(|&i| coords[i] == t2)
        .ok_or_else(|| Error::Structural("no coordinate is exactly t2".into()))?;
    let mut parts = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        if i == axis {
            continue;
        }
        if c.denom().degree_in(Var::T2) != 0 || c.numer().degree_in(Var::T2) > 1 {
            return Err(Error::Structural("coordinate is not t2-linear".into()));
        }
        let num_coeffs = c.numer().coeffs_in(Var::T2);
        let a = RatFunc::new(
            num_coeffs.first().cloned().unwrap_or_else(MultiPoly::zero),
            c.denom().clone(),
            ctx,
        )?;
        let b = RatFunc::new(
            num_coeffs.get(1).cloned().unwrap_or_else(MultiPoly::zero),
            c.denom().clone(),
            ctx,
        )?;
        parts.push((a, b));
    }
    Ok(StandardReducedParam {
        a: parts[0].0.clone(),
        b: parts[0].1.clone(),
        c: parts[1].0.clone(),
        e: parts[1].1.clone(),
        axis,
        undo: None,
    })
}

/// The N-branch ladder in the canonical configuration: sections f0_12 and
/// f0_23 of the (already permuted) surface. Returns the coordinates of a
/// verified parametrization plus the field context it lives in.
fn algorithm2_canonical_pair(
    s: &ImplicitSurface,
    ctx: &FieldCtx,
    trace: &mut Vec<String>,
) -> Result<Option<([RatFunc; 3], FieldCtx)>> {
    let sections = coordinate_sections(s, ctx);
    let sec12 = &sections[0];
    let sec23 = &sections[1];
    if sec12.is_zero || sec23.is_zero {
        return Ok(None);
    }
    let comps12 = match section_components(&sec12.poly, ctx) {
        Ok(c) => c,
        Err(_) => return Ok(None),
    };
    for comp12 in &comps12 {
        let mut ctx12 = ctx.clone();
        let refined = factor_squarefree(comp12, &ctx12)?;
        let _ = refined;
        let curve12 = PlaneCurve::from_squarefree(comp12.clone(), (Var::X1, Var::X2));
        let CurveVerdict::Rational(p12) = rationality(&curve12, &mut ctx12)? else {
            continue;
        };
        let comps23 = match section_components(&sec23.poly, &ctx12) {
            Ok(c) => c,
            Err(_) => continue,
        };
        for comp23 in &comps23 {
            let mut cctx = ctx12.clone();
            let curve23 = PlaneCurve::from_squarefree(comp23.clone(), (Var::X2, Var::X3));
            let CurveVerdict::Rational(p23) = rationality(&curve23, &mut cctx)? else {
                continue;
            };
            trace.push(format!(
                "pair components: {:?} and {:?}",
                comp12, comp23
            ));
            if let Some(coords) =
                branches_n1_to_n5(s, &p12, &p23, &sections[2], &mut cctx, trace)?
            {
                return Ok(Some((coords, cctx)));
            }
        }
    }
    Ok(None)
}

/// Content of g w.r.t. t2 after stripping the t2 power.
fn content_n(g: &MultiPoly, ctx: &FieldCtx) -> MultiPoly {
    if g.is_zero() {
        return MultiPoly::zero();
    }
    let coeffs: Vec<MultiPoly> = g.coeffs_in(Var::T2).into_iter().filter(|c| !c.is_zero()).collect();
    crate::poly::gcd::gcd_many(&coeffs, ctx)
}

/// Iterate the rational components of one content polynomial N_i, imposing
/// the branch constraints on (R, S).
fn rs_candidates(
    n: &MultiPoly,
    require_r_nonconstant: bool,
    ctx: &FieldCtx,
    trace: &mut Vec<String>,
) -> Result<Vec<(RatFunc, RatFunc, FieldCtx)>> {
    let mut out = Vec::new();
    if n.is_constant() {
        return Ok(out);
    }
    let sf = squarefree_part(n, ctx)?;
    if sf.total_degree() > FACTOR_BUDGET {
        trace.push("content polynomial exceeds the factorization budget".into());
        return Ok(out);
    }
    for comp in factor_squarefree(&sf, ctx)? {
        let mut cctx = ctx.clone();
        let curve = PlaneCurve::from_squarefree(comp.clone(), (Var::X1, Var::X2));
        match rationality(&curve, &mut cctx)? {
            CurveVerdict::Rational(p) => {
                let r = p.x.clone();
                let s = p.y.clone();
                if s.is_constant() {
                    trace.push(format!("factor {:?}: S constant; skipped", comp));
                    continue;
                }
                if require_r_nonconstant && r.is_constant() {
                    trace.push(format!("factor {:?}: R constant; skipped", comp));
                    continue;
                }
                if !require_r_nonconstant && r.is_zero() {
                    trace.push(format!("factor {:?}: R = 0; skipped", comp));
                    continue;
                }
                out.push((r, s, cctx));
            }
            CurveVerdict::NotRational(_) => {
                trace.push(format!("factor {:?} not rational", comp));
            }
            CurveVerdict::Undecided(reason) => {
                trace.push(format!("factor {:?} undecided: {reason}", comp));
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn branches_n1_to_n5(
    s: &ImplicitSurface,
    p12: &ProperPlaneParam,
    p23: &ProperPlaneParam,
    sec13: &Section,
    ctx: &mut FieldCtx,
    trace: &mut Vec<String>,
) -> Result<Option<[RatFunc; 3]>> {
    let t2 = RatFunc::var(Var::T2);
    let p1 = ratfunc_in(&p12.x, Var::X2);
    let p2 = ratfunc_in(&p12.y, Var::X2);
    let pt1 = ratfunc_in(&p23.x, Var::X1);
    let pt2 = ratfunc_in(&p23.y, Var::X1);
    if !p12.x.is_zero() {
        // branch 2.1 via N1
        if !pt2.is_zero() {
            let arg1 = p1.sub(&t2.mul(&p1, ctx).div(&pt2, ctx)?, ctx);
            let arg2 = p2.add(
                &t2.mul(&pt1.sub(&p2, ctx), ctx).div(&pt2, ctx)?,
                ctx,
            );
            let g1 = numer_of_substitution(
                &s.f,
                &[(Var::X1, arg1), (Var::X2, arg2), (Var::X3, t2.clone())],
                ctx,
            )?;
            let n1 = content_n(&g1, ctx);
            trace.push(format!("N1 degree {}", n1.total_degree()));
            for (r, s_fun, mut cctx) in rs_candidates(&n1, true, ctx, trace)? {
                let coords =
                    assemble_branch21(&p12.x, &p12.y, &p23.x, &p23.y, &r, &s_fun, &mut cctx)?;
                if satisfies(&s.f, &coords, &cctx) {
                    trace.push("branch 2.1 verified".into());
                    *ctx = cctx;
                    return Ok(Some(coords));
                }
            }
            // branch 2.2 via N2
            let arg1 = p1.sub(&t2.mul(&p1, ctx).div(&pt2, ctx)?, ctx);
            let g2 = numer_of_substitution(
                &s.f,
                &[(Var::X1, arg1), (Var::X2, p2.clone()), (Var::X3, t2.clone())],
                ctx,
            )?;
            let n2 = content_n(&g2, ctx);
            trace.push(format!("N2 degree {}", n2.total_degree()));
            for (r, s_fun, mut cctx) in rs_candidates(&n2, true, ctx, trace)? {
                let ps = p12.x.compose_single(Var::T1, &s_fun, &mut cctx.clone())?;
                let p2s = p12.y.compose_single(Var::T1, &s_fun, &cctx)?;
                let pt2r = p23.y.compose_single(Var::T1, &r, &cctx)?;
                if pt2r.is_zero() {
                    continue;
                }
                let b = ps.div(&pt2r, &cctx)?.neg();
                let coords = [
                    ps.add(&RatFunc::var(Var::T2).mul(&b, &cctx), &cctx),
                    p2s,
                    RatFunc::var(Var::T2),
                ];
                if satisfies(&s.f, &coords, &cctx) {
                    trace.push("branch 2.2 verified".into());
                    *ctx = cctx;
                    return Ok(Some(coords));
                }
            }
        }
        return Ok(None);
    }
    // p1 = 0: branches 3.x; need the third section
    if sec13.is_zero {
        return Ok(None);
    }
    let mut p13: Option<ProperPlaneParam> = None;
    if !sec13.poly.is_constant() {
        if let Ok(comps) = section_components(&sec13.poly, ctx) {
            for comp in comps {
                let curve = PlaneCurve::from_squarefree(comp, (Var::X1, Var::X3));
                if let CurveVerdict::Rational(p) = rationality(&curve, ctx)? {
                    p13 = Some(p);
                    break;
                }
            }
        }
    }
    if let Some(p13) = &p13 {
        let q1 = ratfunc_in(&p13.x, Var::X2);
        let q2 = ratfunc_in(&p13.y, Var::X2);
        if !q2.is_zero() {
            // branch 3.1 via N3: R != 0 allowed constant, S nonconstant
            let arg1 = t2.mul(&q1, ctx).div(&q2, ctx)?;
            let arg2 = RatFunc::var(Var::X1).sub(
                &t2.mul(&RatFunc::var(Var::X1), ctx).div(&q2, ctx)?,
                ctx,
            );
            let g3 = numer_of_substitution(
                &s.f,
                &[(Var::X1, arg1), (Var::X2, arg2), (Var::X3, t2.clone())],
                ctx,
            )?;
            let n3 = content_n(&g3, ctx);
            trace.push(format!("N3 degree {}", n3.total_degree()));
            for (r, s_fun, mut cctx) in rs_candidates(&n3, false, ctx, trace)? {
                let q1s = p13.x.compose_single(Var::T1, &s_fun, &cctx)?;
                let q2s = p13.y.compose_single(Var::T1, &s_fun, &cctx)?;
                if q2s.is_zero() {
                    continue;
                }
                let coords = [
                    RatFunc::var(Var::T2).mul(&q1s.div(&q2s, &cctx)?, &cctx),
                    r.sub(&RatFunc::var(Var::T2).mul(&r.div(&q2s, &mut cctx)?, &cctx), &cctx),
                    RatFunc::var(Var::T2),
                ];
                if satisfies(&s.f, &coords, &cctx) {
                    trace.push("branch 3.1 verified".into());
                    *ctx = cctx;
                    return Ok(Some(coords));
                }
            }
        } else {
            // branch 3.1 second form via N4
            let g4 = numer_of_substitution(
                &s.f,
                &[
                    (Var::X1, t2.mul(&RatFunc::var(Var::X2), ctx)),
                    (Var::X2, t2.mul(&RatFunc::var(Var::X1), ctx)),
                    (Var::X3, t2.clone()),
                ],
                ctx,
            )?;
            let n4 = content_n(&g4, ctx);
            trace.push(format!("N4 degree {}", n4.total_degree()));
            for (r, s_fun, cctx) in rs_candidates(&n4, true, ctx, trace)? {
                let coords = [
                    RatFunc::var(Var::T2).mul(&s_fun, &cctx),
                    RatFunc::var(Var::T2).mul(&r, &cctx),
                    RatFunc::var(Var::T2),
                ];
                if satisfies(&s.f, &coords, &cctx) {
                    trace.push("branch 3.1 (N4) verified".into());
                    *ctx = cctx;
                    return Ok(Some(coords));
                }
            }
        }
    }
    // branch 3.2 via N5
    let g5 = numer_of_substitution(
        &s.f,
        &[
            (Var::X1, t2.mul(&RatFunc::var(Var::X2), ctx)),
            (Var::X2, RatFunc::var(Var::X1)),
            (Var::X3, t2.clone()),
        ],
        ctx,
    )?;
    let n5 = content_n(&g5, ctx);
    trace.push(format!("N5 degree {}", n5.total_degree()));
    for (r, s_fun, cctx) in rs_candidates(&n5, true, ctx, trace)? {
        let coords = [
            RatFunc::var(Var::T2).mul(&s_fun, &cctx),
            r.clone(),
            RatFunc::var(Var::T2),
        ];
        if satisfies(&s.f, &coords, &cctx) {
            trace.push("branch 3.2 verified".into());
            *ctx = cctx;
            return Ok(Some(coords));
        }
    }
    Ok(None)
}

/// P = (p1(S) - t2 p1(S)/pt2(R), p2(S) + t2 (pt1(R) - p2(S))/pt2(R), t2).
fn assemble_branch21(
    p1: &RatFunc,
    p2: &RatFunc,
    pt1: &RatFunc,
    pt2: &RatFunc,
    r: &RatFunc,
    s: &RatFunc,
    ctx: &mut FieldCtx,
) -> Result<[RatFunc; 3]> {
    let t2 = RatFunc::var(Var::T2);
    let p1s = p1.compose_single(Var::T1, s, ctx)?;
    let p2s = p2.compose_single(Var::T1, s, ctx)?;
    let pt1r = pt1.compose_single(Var::T1, r, ctx)?;
    let pt2r = pt2.compose_single(Var::T1, r, ctx)?;
    if pt2r.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok([
        p1s.sub(&t2.mul(&p1s.div(&pt2r, ctx)?, ctx), ctx),
        p2s.add(&t2.mul(&pt1r.sub(&p2s, ctx).div(&pt2r, ctx)?, ctx), ctx),
        t2,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    fn surface(s: &str, ctx: &mut FieldCtx) -> ImplicitSurface {
        ImplicitSurface::new(parse_poly(s, ctx).unwrap(), ctx).unwrap()
    }

    fn sphere(ctx: &mut FieldCtx) -> ImplicitSurface {
        surface("x1^2 + x2^2 + x3^2 - 1", ctx)
    }

    #[test]
    fn sections_of_the_sphere() {
        let mut ctx = FieldCtx::rational();
        let s = sphere(&mut ctx);
        let secs = coordinate_sections(&s, &ctx);
        let expect = parse_poly("x1^2 + x2^2 - 1", &mut ctx).unwrap();
        assert_eq!(secs[0].poly, expect);
        assert!(!secs[0].is_zero);
    }

    #[test]
    fn build_g_hand_expansion() {
        // f = x2 - x1^2 + x1 x3 with (p1, p2) = (t, t^2):
        // g = t2 (x2 - 2 x1 x3 + x3) + t2^2 (x1 - x1^2)
        let mut ctx = FieldCtx::rational();
        let s = surface("x2 - x1^2 + x1*x3", &mut ctx);
        let curve = PlaneCurve::from_squarefree(
            parse_poly("x2 - x1^2", &mut ctx).unwrap(),
            (Var::X1, Var::X2),
        );
        let CurveVerdict::Rational(p12) = rationality(&curve, &mut ctx).unwrap() else {
            panic!()
        };
        let g = build_g(&s, &p12, GVariant::N3, &ctx).unwrap();
        assert_eq!(g.r, 1);
        assert_eq!(g.coeffs.len(), 2);
        let h1 = parse_poly("x2 - 2*x1*x3 + x3", &mut ctx).unwrap();
        let h2 = parse_poly("x1 - x1^2", &mut ctx).unwrap();
        assert!(g.coeffs[0].eq_up_to_constant(&h1, &ctx));
        assert!(g.coeffs[1].eq_up_to_constant(&h2, &ctx));
    }

    #[test]
    fn sphere_g_coefficients_match_the_known_h_polys() {
        let mut ctx = FieldCtx::rational();
        let s = sphere(&mut ctx);
        let secs = coordinate_sections(&s, &ctx);
        let curve = PlaneCurve::from_squarefree(secs[0].poly.clone(), (Var::X1, Var::X2));
        let CurveVerdict::Rational(p12) = rationality(&curve, &mut ctx).unwrap() else {
            panic!()
        };
        let g = build_g(&s, &p12, GVariant::N3, &ctx).unwrap();
        assert_eq!(g.r, 1);
        let h1 = parse_poly("2*x2*x3^2 + 4*x3*x1 - 2*x2", &mut ctx).unwrap();
        let h2 =
            parse_poly("x1^2*x3^2 + x2^2*x3^2 + x3^2 + x1^2 + x2^2 + 1", &mut ctx).unwrap();
        assert!(g.coeffs[0].eq_up_to_constant(&h1, &ctx), "{:?}", g.coeffs[0]);
        assert!(g.coeffs[1].eq_up_to_constant(&h2, &ctx), "{:?}", g.coeffs[1]);
    }

    #[test]
    fn algorithm1_parametrizes_the_sphere_over_gaussian_rationals() {
        let mut ctx = FieldCtx::rational();
        let s = sphere(&mut ctx);
        let out = algorithm1(&s, &ctx).unwrap();
        let RuledVerdict::Parametrized(p) = out.verdict else {
            panic!("sphere is ruled: {:?}", out.verdict);
        };
        assert_eq!(out.field, "Q(sqrt(-1))");
        let cctx = FieldCtx::quadratic(-1).unwrap();
        assert!(satisfies(&s.f, &p.coords(&cctx), &cctx));
        assert!(p.shape_ok(&cctx));
    }

    #[test]
    fn algorithm1_on_simple_cubic_surface() {
        let mut ctx = FieldCtx::rational();
        let s = surface("x2 - x1^2 + x1*x3", &mut ctx);
        let out = algorithm1(&s, &ctx).unwrap();
        let RuledVerdict::Parametrized(p) = out.verdict else {
            panic!("surface is ruled: {:?}", out.verdict);
        };
        assert!(satisfies(&s.f, &p.coords(&ctx), &ctx));
        assert!(p.shape_ok(&ctx));
    }

    #[test]
    fn fermat_quartic_is_not_ruled() {
        let mut ctx = FieldCtx::rational();
        let s = surface("x1^4 + x2^4 + x3^4 - 1", &mut ctx);
        let out = algorithm1(&s, &ctx).unwrap();
        let RuledVerdict::NotRuled(certs) = out.verdict else {
            panic!("expected NotRuled, got {:?}", out.verdict);
        };
        assert_eq!(certs.len(), 3);
        assert!(certs.iter().all(|c| c.genus.genus == 3));
    }

    #[test]
    fn algorithm2_cylinder_shortcut() {
        let mut ctx = FieldCtx::rational();
        let s = surface("x2 - x1^2", &mut ctx);
        let out = algorithm2(&s, &ctx).unwrap();
        let RuledVerdict::Parametrized(p) = out.verdict else {
            panic!("parabolic cylinder: {:?}", out.verdict);
        };
        assert_eq!(p.axis, 2);
        assert!(satisfies(&s.f, &p.coords(&ctx), &ctx));
        // expected (t1, t1^2, t2)
        assert_eq!(p.a, RatFunc::var(Var::T1));
        assert!(p.b.is_zero() && p.e.is_zero());
    }

    #[test]
    fn algorithm2_on_simple_cubic_surface() {
        let mut ctx = FieldCtx::rational();
        let s = surface("x2 - x1^2 + x1*x3", &mut ctx);
        let out = algorithm2(&s, &ctx).unwrap();
        let RuledVerdict::Parametrized(p) = out.verdict else {
            panic!("surface is ruled: {:?}", out.verdict);
        };
        let cctx = FieldCtx::rational();
        assert!(satisfies(&s.f, &p.coords(&cctx), &cctx));
    }

    #[test]
    fn algorithm2_hyperbolic_paraboloid_family() {
        // x1 x2 - x3^2: sections are line pairs through the origin
        let mut ctx = FieldCtx::rational();
        let s = surface("x1*x2 - x3^2", &mut ctx);
        let out = algorithm2(&s, &ctx).unwrap();
        let RuledVerdict::Parametrized(p) = out.verdict else {
            panic!("quadric is ruled: {:?}", out.verdict);
        };
        let cctx = FieldCtx::rational();
        assert!(satisfies(&s.f, &p.coords(&cctx), &cctx));
    }

    #[test]
    fn transform_regularizes_and_undo_verifies() {
        let mut ctx = FieldCtx::rational();
        let s = surface("x1*x2 - x3^2", &mut ctx);
        let (s2, a) = with_random_linear_transform(&s, 7, 1, &ctx);
        assert_ne!(det3_int(&a), 0);
        // parametrize the transformed surface with algorithm 1 and verify
        // undo maps back to the original
        let out = algorithm1(&s2, &ctx).unwrap();
        if let RuledVerdict::Parametrized(p) = out.verdict {
            let mut p = *p;
            p.undo = Some(a);
            let cctx = FieldCtx::quadratic(-1).unwrap();
            let mapped = p.coords_on_original(&cctx);
            assert!(satisfies(&s.f, &mapped, &cctx) || {
                let cq = FieldCtx::rational();
                satisfies(&s.f, &p.coords_on_original(&cq), &cq)
            });
        }
    }

    #[test]
    fn plane_parametrized_directly() {
        let mut ctx = FieldCtx::rational();
        let s = surface("x1 + 2*x2 + x3 - 5", &mut ctx);
        for out in [algorithm1(&s, &ctx).unwrap(), algorithm2(&s, &ctx).unwrap()] {
            let RuledVerdict::Parametrized(p) = out.verdict else {
                panic!("plane is ruled");
            };
            assert!(satisfies(&s.f, &p.coords(&ctx), &ctx));
        }
    }
}
