//! Upper and lower Banach estimates of a few classic sets.
//!
//! `cargo run --example density`

use shiftlab::density::{density_report, longest_ap, FiniteSubset, Origin};
use shiftlab::family::{family_membership, FamilyProxy};

fn main() -> shiftlab::Result<()> {
    let n = 1 << 14;
    let sets = [
        ("multiples of 3", FiniteSubset::from_predicate(n, Origin::One, |x| x % 3 == 0)),
        ("squares", FiniteSubset::from_predicate(n, Origin::One, |x| {
            let r = (x as f64).sqrt() as u64;
            r * r == x || (r + 1) * (r + 1) == x
        })),
        // long runs separated by ever longer holes: thick but not syndetic
        ("dyadic runs", FiniteSubset::from_predicate(n, Origin::One, |x| x.ilog2() % 2 == 0)),
    ];
    let windows = [16, 256, 4096];
    for (name, a) in &sets {
        let rep = density_report(a, &windows)?;
        println!("{name}: |A ∩ [1,{n}]| = {}, max gap {:?}", rep.cardinality, rep.max_gap);
        for (i, s) in windows.iter().enumerate() {
            println!(
                "  s = {s:>5}  upper {:.4}  lower {:.4}",
                rep.window_max_counts[i] as f64 / *s as f64,
                rep.window_min_counts[i] as f64 / *s as f64,
            );
        }
        let ap = longest_ap(a, 12)?;
        println!("  longest AP (≤ 12 terms): {} + {}·i, {} terms", ap.start, ap.step, ap.length);
        for proxy in [FamilyProxy::syndetic(8), FamilyProxy::banach_lower(0.25, 256)] {
            let m = family_membership(a, &proxy)?;
            println!("  {} -> {}", proxy.label(), m.holds);
        }
    }
    Ok(())
}
