//! Decidable finite stand-ins for membership in a family of subsets of ℕ.
//!
//! Filters such as the cofinite filter, the syndetic sets or the sets of
//! positive Banach density cannot be decided from a finite prefix. Each
//! [`FamilyProxy`] fixes the parameters that make the question finite and
//! returns a concrete witness whenever membership fails.

use serde::{Deserialize, Serialize};

use crate::density::{largest_gap, window_extremes, worst_window, FiniteSubset, Gap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyProxy {
    /// `[from, N] ⊆ A`.
    Cofinite { from: u64 },
    /// Largest gap at most `max_gap`.
    SyndeticGap { max_gap: u64 },
    /// Every window `[k+1, k+s]` with `k ≥ from` holds at least `δ·s` members.
    BanachLower { delta: f64, window: u64, from: u64 },
    /// Some window `[k+1, k+s]` holds at least `δ·s` members.
    BanachUpper { delta: f64, window: u64 },
}

impl FamilyProxy {
    pub fn cofinite(from: u64) -> Self {
        FamilyProxy::Cofinite { from }
    }

    pub fn syndetic(max_gap: u64) -> Self {
        FamilyProxy::SyndeticGap { max_gap }
    }

    pub fn banach_lower(delta: f64, window: u64) -> Self {
        FamilyProxy::BanachLower {
            delta,
            window,
            from: 0,
        }
    }

    pub fn banach_upper(delta: f64, window: u64) -> Self {
        FamilyProxy::BanachUpper { delta, window }
    }

    pub fn label(&self) -> String {
        match self {
            FamilyProxy::Cofinite { from } => format!("cofinite(from={from})"),
            FamilyProxy::SyndeticGap { max_gap } => format!("syndetic(gap<={max_gap})"),
            FamilyProxy::BanachLower {
                delta,
                window,
                from,
            } => format!("banach_lower(delta={delta}, s={window}, from={from})"),
            FamilyProxy::BanachUpper { delta, window } => {
                format!("banach_upper(delta={delta}, s={window})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Missing { n: u64 },
    Gap(Gap),
    Window { start: u64, size: u64, count: u64 },
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Membership {
    fn yes() -> Self {
        Membership {
            holds: true,
            witness: None,
        }
    }

    fn no(witness: Witness) -> Self {
        Membership {
            holds: false,
            witness: Some(witness),
        }
    }
}

fn meets(count: u64, window: u64, delta: f64) -> bool {
    count as f64 >= delta * window as f64
}

pub fn family_membership(a: &FiniteSubset, proxy: &FamilyProxy) -> Result<Membership> {
    let n = a.horizon();
    match *proxy {
        FamilyProxy::Cofinite { from } => {
            if from > n {
                return Err(Error::range(format!(
                    "cofinite start {from} beyond horizon {n}"
                )));
            }
            Ok(match a.complement_runs(from, n).first() {
                Some(&(missing, _)) => Membership::no(Witness::Missing { n: missing }),
                None => Membership::yes(),
            })
        }
        FamilyProxy::SyndeticGap { max_gap } => Ok(match largest_gap(a) {
            None => Membership::no(Witness::Empty),
            Some(g) if g.len > max_gap => Membership::no(Witness::Gap(g)),
            Some(_) => Membership::yes(),
        }),
        FamilyProxy::BanachLower {
            delta,
            window,
            from,
        } => {
            check_window(window, from, n)?;
            let counts = a.prefix_counts();
            let (k, count) = worst_window(&counts, window, from).expect("window validated");
            Ok(if meets(count, window, delta) {
                Membership::yes()
            } else {
                Membership::no(Witness::Window {
                    start: k + 1,
                    size: window,
                    count,
                })
            })
        }
        FamilyProxy::BanachUpper { delta, window } => {
            check_window(window, 0, n)?;
            let counts = a.prefix_counts();
            let (best, _) = window_extremes(&counts, window, 0).expect("window validated");
            Ok(if meets(best, window, delta) {
                Membership::yes()
            } else {
                let start = (0..=n - window)
                    .find(|&k| counts[(k + window) as usize] - counts[k as usize] == best)
                    .expect("best window exists")
                    + 1;
                Membership::no(Witness::Window {
                    start,
                    size: window,
                    count: best,
                })
            })
        }
    }
}

fn check_window(window: u64, from: u64, horizon: u64) -> Result<()> {
    if window == 0 {
        return Err(Error::range("proxy window must be positive"));
    }
    if window + from > horizon {
        return Err(Error::WindowTooLarge {
            window: window + from,
            horizon,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Origin;

    #[test]
    fn cofinite_tail() {
        let a = FiniteSubset::interval(5, 100, 100).unwrap();
        let m = family_membership(&a, &FamilyProxy::cofinite(5)).unwrap();
        assert!(m.holds);
        let m = family_membership(&a, &FamilyProxy::cofinite(3)).unwrap();
        assert_eq!(m.witness, Some(Witness::Missing { n: 3 }));
        assert!(family_membership(&a, &FamilyProxy::cofinite(101)).is_err());
    }

    #[test]
    fn syndetic_with_gap() {
        let a = FiniteSubset::from_predicate(99, Origin::One, |x| x % 3 == 0);
        let m = family_membership(&a, &FamilyProxy::syndetic(2)).unwrap();
        assert!(!m.holds);
        assert!(matches!(m.witness, Some(Witness::Gap(Gap { len: 3, .. }))));
        assert!(family_membership(&a, &FamilyProxy::syndetic(3)).unwrap().holds);
        let e = FiniteSubset::empty(10, Origin::One);
        let m = family_membership(&e, &FamilyProxy::syndetic(3)).unwrap();
        assert_eq!(m.witness, Some(Witness::Empty));
    }

    #[test]
    fn banach_windows() {
        let a = FiniteSubset::from_predicate(100, Origin::One, |x| x % 4 != 0);
        assert!(family_membership(&a, &FamilyProxy::banach_lower(0.75, 8)).unwrap().holds);
        let m = family_membership(&a, &FamilyProxy::banach_lower(0.8, 8)).unwrap();
        assert_eq!(
            m.witness,
            Some(Witness::Window {
                start: 1,
                size: 8,
                count: 6
            })
        );
        assert!(family_membership(&a, &FamilyProxy::banach_upper(0.75, 8)).unwrap().holds);
        assert!(!family_membership(&a, &FamilyProxy::banach_upper(0.9, 8)).unwrap().holds);
        assert!(family_membership(&a, &FamilyProxy::banach_lower(0.5, 101)).is_err());
    }
}
