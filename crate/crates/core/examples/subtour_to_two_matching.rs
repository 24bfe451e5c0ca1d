//! Subtour LP, split graph, min-cost 2MO through the matching reduction, and
//! the resulting certificate.

use twomatch::generate::random_metric;
use twomatch::rat::fmt_rat;
use twomatch::twomo::g2m_from_subtour;

fn main() -> twomatch::Result<()> {
    let inst = random_metric(8, 11)?;
    let cert = g2m_from_subtour(&inst)?;
    println!("alpha            {}", fmt_rat(&cert.alpha));
    println!("subtour          {}", fmt_rat(&cert.subtour.objective));
    println!("mapped 2MO point {}", fmt_rat(&cert.mapped_cost));
    println!("min-cost 2MO     {}", fmt_rat(&cert.twomo_cost));
    println!("G2M              {}  (bound {})", fmt_rat(&cert.g2m_cost), fmt_rat(&cert.bound));
    println!("2-matching       {}", fmt_rat(&cert.two_matching_cost));
    println!("cycles           {:?}", cert.two_matching.cycles);
    assert!(cert.passed());
    Ok(())
}
