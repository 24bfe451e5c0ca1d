//! The 10/9 construction, which needs an F2M without cut edges.

use twomatch::generate::{dumbbell, worst_case_family};
use twomatch::pipeline::{g2m109_with, Applicability};
use twomatch::rat::fmt_rat;

fn main() -> twomatch::Result<()> {
    let cases = [
        ("family ell=2", worst_case_family(2)?),
        ("family ell=4", worst_case_family(4)?),
        ("dumbbell 1,3", dumbbell(1, 3)?),
        ("dumbbell 2,2", dumbbell(2, 2)?),
    ];
    for (name, (inst, x)) in cases {
        match g2m109_with(&inst, &x)? {
            Applicability::Ran(run) => println!(
                "{name}: f2m {} -> g2m {} (bound {}), 2m {}",
                fmt_rat(&run.f2m_cost),
                fmt_rat(&run.g2m_cost),
                fmt_rat(&run.bound),
                fmt_rat(&run.two_matching_cost)
            ),
            Applicability::NotApplicable { reason } => println!("{name}: not applicable ({reason})"),
        }
    }
    Ok(())
}
