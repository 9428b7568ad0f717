//! Self-test of the orbit engine. If `T^{s₁}x ∈ U ∩ T^{-n}V` and `s₂ ≤ s₁`
//! is another such time, then `y = T^{s₂}x` satisfies `T^{s₁-s₂+n}y ∈ V`.
//! Both sides are computed from scratch, so any disagreement is an engine bug.
//!
//! `cargo run --release --example inclusion`

use shiftlab::dsl::weights_from_spec;
use shiftlab::recurrence::{basis_ball, discover_transfer_time, inclusion_check};
use shiftlab::shift::{build_schedule, Space};

fn main() -> shiftlab::Result<()> {
    let table = weights_from_spec("bilateral(2, 1/2)")?.table(512)?;
    let side = table.side();
    let u = basis_ball(Space::Lp(2), side, 0, "1/2".parse().unwrap())?;
    let v = basis_ball(Space::Lp(2), side, 3, "1/2".parse().unwrap())?;
    let Some((n, z)) = discover_transfer_time(&table, &u, &v, 64)? else {
        println!("no transfer time below 64");
        return Ok(());
    };
    println!("n = {n} ∈ N(U, V), certified by z with support {:?}", z.support());

    let targets: Vec<_> = [4u64, 10, 30, 70]
        .into_iter()
        .map(|t| Ok((t, z.clone())))
        .collect::<shiftlab::Result<_>>()?;
    let x = build_schedule(&table, &targets, Space::Lp(2))?;
    let rep = inclusion_check(&table, x.vector(), &u, &v, n, 120)?;
    println!(
        "hits {:?}: {} pairs, {} verified, {} borderline, {} violations",
        rep.hits, rep.pairs, rep.verified, rep.borderline, rep.violations.len()
    );
    Ok(())
}
