//! Map a subtour point into the split graph and check the 2MO polytope,
//! then push it through the matching reduction and check that polytope too.

use twomatch::generate::random_metric;
use twomatch::matching::check_matching_polytope_by_separation;
use twomatch::rat::{fmt_rat, rat};
use twomatch::subtour::solve_subtour_lp;
use twomatch::twomo::{check_2mo_polytope, map_point_to_matching_polytope, map_subtour_to_2mo, reduce_2mo_to_matching, split_graph};

fn main() -> twomatch::Result<()> {
    let inst = random_metric(6, 2)?;
    let x = solve_subtour_lp(&inst)?;
    let split = split_graph(&inst);
    for alpha in [rat(0, 1), rat(1, 9), rat(1, 3), rat(1, 2)] {
        let y = map_subtour_to_2mo(&x.values, &alpha);
        let red = reduce_2mo_to_matching(&split);
        let image = map_point_to_matching_polytope(&red, &split, &y)?;
        println!(
            "alpha {:>3}: cost {}  2MO {:?}  matching image {:?}",
            fmt_rat(&alpha),
            fmt_rat(&y.cost(&split)),
            check_2mo_polytope(&split, &y)?,
            check_matching_polytope_by_separation(&red.graph, &image)?
        );
    }
    Ok(())
}
