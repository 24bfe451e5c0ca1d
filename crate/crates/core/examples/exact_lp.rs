//! Solve a small LP exactly and check the dual certificate.
//!
//! ```text
//! cargo run --example exact_lp
//! ```

use twomatch::lp::{solve_lp, Constraint, LinearProgram, Relation};
use twomatch::rat::{fmt_rat, int, rat};

fn main() -> twomatch::Result<()> {
    // min -x - y  s.t.  3x + 2y <= 7,  x + 3y <= 6,  0 <= x, y
    let mut lp = LinearProgram::new();
    let x = lp.add_var(int(0), None, int(-1));
    let y = lp.add_var(int(0), None, int(-1));
    lp.add_constraint(Constraint::new(vec![(x, int(3)), (y, int(2))], Relation::Le, int(7)));
    lp.add_constraint(Constraint::new(vec![(x, int(1)), (y, int(3))], Relation::Le, int(6)));

    let sol = solve_lp(&lp)?;
    println!("status    {:?} after {} pivots", sol.status, sol.pivots);
    println!("x, y      {}, {}", fmt_rat(&sol.values[x]), fmt_rat(&sol.values[y]));
    println!("objective {}", fmt_rat(&sol.objective));
    assert_eq!(sol.objective, rat(-20, 7));

    let cert = sol.duals.as_ref().expect("optimal solutions carry duals");
    let dual = cert.verify(&lp).expect("certificate checks out");
    println!("dual obj  {} (equal: {})", fmt_rat(&dual), dual == sol.objective);
    Ok(())
}
