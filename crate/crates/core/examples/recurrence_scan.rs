//! For which `k` does the return set `F = N(x, U)` contain many progressions
//! `a, a+k, …, a+rk`? The scan estimates the upper Banach density of
//! `M_{k,r} = F ∩ (F-k) ∩ ⋯ ∩ (F-rk)` with windows of size `s`.
//!
//! `cargo run --release --example recurrence_scan`

use shiftlab::dsl::weights_from_spec;
use shiftlab::recurrence::{basis_ball, recurrence_scan, ScanParams};
use shiftlab::shift::{build_schedule, FiniteVector, Space};
use shiftlab::weights::Side;

fn main() -> shiftlab::Result<()> {
    let table = weights_from_spec("rolewicz(2)")?.table(4096)?;
    // return to e_0 at every multiple of 6 up to 600
    let targets: Vec<_> = (1..=100)
        .map(|i| Ok((6 * i, FiniteVector::basis(Space::Lp(2), Side::Unilateral, 0)?)))
        .collect::<shiftlab::Result<_>>()?;
    let x = build_schedule(&table, &targets, Space::Lp(2))?;
    let ball = basis_ball(Space::Lp(2), Side::Unilateral, 0, "1/2".parse().unwrap())?;
    for r in [1, 2, 3] {
        let exp = recurrence_scan(&table, x.vector(), &ball, 600, ScanParams::new(r, 40, 60), None)?;
        println!("r = {r}: W_r = {:?} (δ = {:.3})", exp.w_r, exp.delta);
    }
    Ok(())
}
