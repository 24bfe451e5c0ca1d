//! Optimal 2-matching over subtour value along the worst-case family, as CSV.

fn main() -> twomatch::Result<()> {
    let max_ell = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    println!("ell,n,subtour,optimal_2m,ratio,ratio_decimal");
    for row in twomatch::verify::family_table(max_ell)? {
        println!(
            "{},{},{},{},{},{}",
            row.ell, row.n, row.subtour.exact, row.optimal_2m.exact, row.ratio.exact, row.ratio.decimal
        );
    }
    Ok(())
}
