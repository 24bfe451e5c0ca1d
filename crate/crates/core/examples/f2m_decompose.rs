//! Solve the fractional 2-matching LP and split it into cycles and paths.

use twomatch::f2m::{decompose, has_cut_edge, solve_f2m, ComponentKind};
use twomatch::generate::dumbbell;
use twomatch::rat::fmt_rat;

fn main() -> twomatch::Result<()> {
    let (inst, bundled) = dumbbell(1, 2)?;
    for (label, x) in [("bundled", bundled), ("lp optimum", solve_f2m(&inst)?)] {
        let d = decompose(&inst, &x)?;
        println!("{label}: cost {}, cut edge: {}", fmt_rat(&x.objective), has_cut_edge(&d));
        for c in &d.components {
            if c.kind == ComponentKind::Fractional {
                println!("  fractional on {:?}", c.vertices);
                println!("    half-cycles {:?}", c.cycles);
                for p in &c.paths {
                    println!("    path {:?} cost {} cut {}", p.vertices, fmt_rat(&p.cost), p.is_cut);
                }
            } else {
                println!("  {:?} on {:?}", c.kind, c.vertices);
            }
        }
    }
    Ok(())
}
