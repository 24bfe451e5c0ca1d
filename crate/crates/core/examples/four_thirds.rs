//! The 4/3 construction: cut-path gadgets, a cheap perfect matching, and the
//! decoded graphical 2-matching.

use twomatch::f2m::solve_f2m;
use twomatch::generate::random_metric;
use twomatch::pipeline::g2m43_with;
use twomatch::rat::fmt_rat;

fn main() -> twomatch::Result<()> {
    for seed in 0..8 {
        let inst = random_metric(9, seed)?;
        let x = solve_f2m(&inst)?;
        let run = g2m43_with(&inst, &x)?;
        println!(
            "seed {seed}: f2m {:>8}  g2m {:>8}  2m {:>8}  components {}  ok {}",
            fmt_rat(&run.f2m_cost),
            fmt_rat(&run.g2m_cost),
            fmt_rat(&run.two_matching_cost),
            run.components.len(),
            run.passed()
        );
        assert!(run.passed());
    }
    Ok(())
}
