//! Vectors whose orbit visits prescribed targets at prescribed times.
//!
//! Under the Rolewicz weight `w ≡ 2`, the pullback of `e_0` by `t` steps is
//! `2^{-t} e_t`; summing such pullbacks over a geometric schedule gives a
//! vector returning to `B(e_0, 1/2)` exactly at the scheduled times.
//!
//! `cargo run --example schedules`

use shiftlab::dsl::weights_from_spec;
use shiftlab::io::geometric_schedule;
use shiftlab::recurrence::basis_ball;
use shiftlab::shift::{ball_membership, build_schedule, return_set, Space};
use shiftlab::weights::Side;

fn main() -> shiftlab::Result<()> {
    let w = weights_from_spec("rolewicz(2)")?;
    let table = w.table(2048)?;
    let targets = geometric_schedule(Space::Lp(2), Side::Unilateral, 4, 5, 0)?;
    let x = build_schedule(&table, &targets, Space::Lp(2))?;
    println!("times {:?}", x.times());
    println!("log2 ||x||_2^2 = {:.4}", x.norm().log2);
    for k in [0, 5, 100] {
        println!("log2 tail beyond {k}: {:.4}", x.tail_bound(k).log2);
    }
    let ball = basis_ball(Space::Lp(2), Side::Unilateral, 0, "1/2".parse().unwrap())?;
    for n in [3, 4, 5, 16, 64] {
        let o = ball_membership(&table, &x, n, &ball)?;
        println!("n = {n:>3}: {:?}", o.verdict);
    }
    let f = return_set(&table, x.vector(), &ball, 1024, None)?;
    println!("N(x, U) ∩ [0, 1024] = {:?}", f.set.members());
    Ok(())
}
