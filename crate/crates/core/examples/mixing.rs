//! Mixing weights `w_ν = ((ν+1)/ν)^{1/(2p)}`: the prefix product is
//! `(n+1)^{1/(2p)}`, so every `A_{M;0}` is cofinite, but return sets to a ball
//! around `e_0` are sparse.
//!
//! `cargo run --release --example mixing`

use shiftlab::counterexamples::{gen_menet_weights, menet_closed_form};
use shiftlab::io::geometric_schedule;
use shiftlab::numeric::Threshold;
use shiftlab::recurrence::{banach_return_audit, basis_ball};
use shiftlab::shift::{build_schedule, Space};
use shiftlab::weights::Side;
use shiftlab::weights::mixing_check;

fn main() -> shiftlab::Result<()> {
    let p = 2.0;
    let w = gen_menet_weights(p)?;
    let table = w.table(1_000_000)?;
    for n in [1u64, 99, 9_999, 999_999] {
        let t = table.get(n as i64)?.to_f64();
        println!("log2 ∏_(ν≤{n}) w_ν = {t:.6}  closed form {:.6}", menet_closed_form(n, p));
    }
    let ms = [Threshold::pow2(1), Threshold::pow2(3), Threshold::pow2(4)];
    let rep = mixing_check(&table, &ms, 100_000)?;
    println!("max float error {:.2e}", rep.max_log2_error);
    for e in &rep.entries {
        println!("M = {:>4}: {:?}, A_(M;0) ⊇ [{:?}, N]", e.threshold, e.verdict, e.tail_start);
    }

    // orbits visiting B(e_0, 1/2) on geometric schedules: the window estimates fall off
    let ball = basis_ball(Space::Lp(2), Side::Unilateral, 0, "1/2".parse().unwrap())?;
    let mut vectors = Vec::new();
    for base in [2u64, 3, 4] {
        let targets = geometric_schedule(Space::Lp(2), Side::Unilateral, base, 8, 0)?;
        let x = build_schedule(&table, &targets, Space::Lp(2))?;
        vectors.push((format!("base {base}"), x.vector().clone()));
    }
    let windows = [8, 64, 512, 4096];
    let audit = banach_return_audit(&table, &vectors, &ball, 65_536, &windows, Some(0.1))?;
    for row in &audit.rows {
        println!("{}: {} returns, estimates {:?}", row.label, row.returns, row.estimates);
    }
    Ok(())
}
