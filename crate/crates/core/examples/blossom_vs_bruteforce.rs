//! Blossom against exhaustive search on random multigraphs.

use twomatch::generate::random_multigraph;
use twomatch::matching::{brute_force_perfect_matching, min_cost_perfect_matching};
use twomatch::rat::fmt_rat;

fn main() {
    let mut agree = 0;
    for seed in 0..25 {
        let g = random_multigraph(10, seed);
        let fast = min_cost_perfect_matching(&g);
        let slow = brute_force_perfect_matching(&g);
        match (&fast, &slow) {
            (Ok(a), Ok(b)) => {
                println!("seed {seed:2}: {} edges, cost {}", g.num_edges(), fmt_rat(&a.cost));
                assert_eq!(a.cost, b.cost);
            }
            (Err(_), Err(_)) => println!("seed {seed:2}: no perfect matching"),
            _ => panic!("seed {seed}: solvers disagree"),
        }
        agree += 1;
    }
    println!("{agree}/25 agree");
}
