//! The scaling `λ_n = 2^{2^r}` on the block `[2^{r-1}, 2^r)`.
//!
//! Inside a block `λ_n / λ_{n+k} = 1` for every shift `k ∈ A`, so the set `S`
//! of such `n` has lower Banach density one, while across block boundaries the
//! ratio collapses.
//!
//! `cargo run --example dyadic_blocks`

use shiftlab::counterexamples::gen_example313;
use shiftlab::density::density_report;

fn main() -> shiftlab::Result<()> {
    let e = gen_example313(&[1, 2], 16)?;
    println!("A = {:?}, horizon 2^{} = {}", e.shifts, e.horizon_exponent, e.horizon());
    for n in [1u64, 2, 3, 4, 7, 8, 1023, 1024] {
        println!("log2 λ_{n} = {}", e.log2_lambda(n).unwrap());
    }
    for (n, k) in [(8, 2), (14, 2), (15, 1), (1000, 2)] {
        println!("log2 λ_{n}/λ_{} = {}", n + k, e.log2_ratio(n, k).unwrap());
    }
    let windows = [64, 1024, 8192];
    let rep = density_report(&e.s, &windows)?;
    for (i, s) in windows.iter().enumerate() {
        println!(
            "s = {s:>4}: lower estimate {:.4}, one hole per window from n = {:?}",
            rep.window_min_counts[i] as f64 / *s as f64,
            e.one_hole_start(*s)
        );
    }
    Ok(())
}
