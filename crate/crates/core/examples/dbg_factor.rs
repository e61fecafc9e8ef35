use ruled_core::implicit::*;
use ruled_core::scalar::FieldCtx;
use ruled_core::text::parse_poly;
use std::time::Instant;

const QUARTIC: &str = "-49*x2*x1^3 - 799*x3*x2*x1^2 + 20*x2*x1^2 + 2*x2^2*x1^2 + 980*x3*x1^2 \
 - 2205*x3^2*x1^2 + x2^3*x1 - 33750*x3^3*x1 - 400*x3*x1 + 606*x3*x2*x1 - 5*x2^2*x1 \
 - 68*x3*x2^2*x1 - 1747*x3^2*x2*x1 - 25*x3^2*x1 + x2^3*x3 - 25*x2^2*x3^2 + 1396*x2*x3^2 \
 - 1120*x3^2 - 48915*x3^4 - 5190*x3^3 - 4237*x2*x3^3 - 14*x2^2*x3";

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    let mut ctx = FieldCtx::rational();
    let f = parse_poly(QUARTIC, &mut ctx).unwrap();
    let s = ImplicitSurface::new(f.clone(), &ctx).unwrap();
    let t0 = Instant::now();
    let out = if which == "2" {
        algorithm2(&s, &ctx).unwrap()
    } else {
        algorithm1(&s, &ctx).unwrap()
    };
    eprintln!("elapsed: {:?}", t0.elapsed());
    eprintln!("field: {}", out.field);
    for line in &out.trace {
        eprintln!("  {line}");
    }
    match out.verdict {
        RuledVerdict::Parametrized(p) => {
            let cctx = if out.field.contains("sqrt") {
                FieldCtx::quadratic(2).unwrap()
            } else {
                FieldCtx::rational()
            };
            eprintln!("axis {}", p.axis);
            eprintln!("verified: {}", satisfies(&s.f, &p.coords(&cctx), &cctx));
        }
        v => eprintln!("verdict: {:?}", v),
    }
}
