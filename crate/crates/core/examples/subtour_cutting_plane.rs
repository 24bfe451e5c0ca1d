//! Cutting-plane subtour LP with the cuts it found, checked against the LP
//! holding every subtour constraint up front.

use twomatch::generate::random_metric;
use twomatch::rat::fmt_rat;
use twomatch::subtour::{solve_subtour_lp, solve_subtour_lp_enumerated, verify_subtour_feasible};

fn main() -> twomatch::Result<()> {
    // First seed whose degree LP optimum has a subtour.
    let (inst, sol) = (0..)
        .map(|seed| {
            let inst = random_metric(8, seed).unwrap();
            let sol = solve_subtour_lp(&inst).unwrap();
            (inst, sol)
        })
        .find(|(_, sol)| !sol.cut_pool.is_empty())
        .unwrap();
    let history: Vec<String> = sol.history.iter().map(fmt_rat).collect();
    println!("rounds  {}", history.join(" -> "));
    for s in &sol.cut_pool {
        println!("cut     {s:?}");
    }
    assert_eq!(verify_subtour_feasible(&inst, &sol.values)?, None);
    let full = solve_subtour_lp_enumerated(&inst)?;
    println!("full LP {} (same: {})", fmt_rat(&full.objective), full.objective == sol.objective);
    Ok(())
}
