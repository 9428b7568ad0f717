//! A dyadic weight that is multiply recurrent without being syndetic.
//!
//! Stage `m` puts a block of 2's ending at `m·n_m`, a compensator that brings
//! the prefix product back below one, and `m` trailing 2's. The criterion set
//! `A_{1;0}` then has holes that never close up at the stage boundaries, yet
//! every order `m` has a time `n` with all of `ln`, `l ≤ m`, in the set.
//!
//! `cargo run --example multiple_recurrence`

use shiftlab::counterexamples::gen_prop2_weights;
use shiftlab::numeric::Threshold;
use shiftlab::weights::{multiple_recurrence_check, syndetic_operator_check, Verdict};

fn main() -> shiftlab::Result<()> {
    let (w, stages) = gen_prop2_weights(6)?;
    println!("stage  n_m  block        compensator  end");
    for s in &stages {
        println!(
            "{:>5}  {:>5}  [{}, {}]  2^-{} at {}  {}",
            s.stage, s.n, s.block_start, s.block_end, s.compensator_exponent, s.compensator_position, s.stage_end
        );
    }
    let table = w.table(stages.last().unwrap().stage_end)?;

    let one = [Threshold::pow2(0)];
    for g in [4, 6, 7] {
        let rep = syndetic_operator_check(&table, &one, g)?;
        let e = &rep.entries[0];
        println!("gaps ≤ {g}: {:?} (largest gap {:?})", e.verdict, e.max_gap);
    }

    let rep = multiple_recurrence_check(&table, 6, &one)?;
    for e in &rep.entries {
        if e.verdict == Verdict::Holds {
            println!("order {}: witness {:?}", e.order.unwrap(), e.witness);
        } else {
            println!("order {}: {:?}", e.order.unwrap(), e.verdict);
        }
    }
    Ok(())
}
