//! Deterministic value assignments and the GHZ parity constraints.

use core::fmt;
use core::str::FromStr;

use alloc::format;
use alloc::vec::Vec;

use crate::quantum::{Basis, Sign};
use crate::Error;

/// Predetermined outcomes `A_j` (x measurement) and `B_j` (y measurement)
/// for each particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValueAssignment {
    pub a: [Sign; 3],
    pub b: [Sign; 3],
}

impl ValueAssignment {
    pub fn new(a: [Sign; 3], b: [Sign; 3]) -> ValueAssignment {
        ValueAssignment { a, b }
    }

    /// Decodes the 6-bit integer `A1 A2 A3 B1 B2 B3` (A1 most significant,
    /// `+1 ↦ 0`).
    pub fn from_code(code: u8) -> ValueAssignment {
        let bit = |k: u8| Sign::from_bit(usize::from((code >> (5 - k)) & 1));
        ValueAssignment {
            a: [bit(0), bit(1), bit(2)],
            b: [bit(3), bit(4), bit(5)],
        }
    }

    pub fn code(&self) -> u8 {
        self.a
            .iter()
            .chain(self.b.iter())
            .fold(0u8, |acc, s| acc << 1 | s.bit() as u8)
    }

    /// Value for particle `j` (0-based) measured along `basis`.
    pub fn value(&self, particle: usize, basis: Basis) -> Sign {
        match basis {
            Basis::X => self.a[particle],
            Basis::Y => self.b[particle],
        }
    }

    /// Flip both `A_j` and `B_j` of one particle.
    pub fn flip_particle(mut self, particle: usize) -> ValueAssignment {
        self.a[particle] = -self.a[particle];
        self.b[particle] = -self.b[particle];
        self
    }

    /// All 64 assignments in code order.
    pub fn all() -> impl Iterator<Item = ValueAssignment> {
        (0u8..64).map(ValueAssignment::from_code)
    }
}

impl fmt::Display for ValueAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.a.iter().chain(self.b.iter()) {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

/// Parses a 6-sign string `A1A2A3B1B2B3`, e.g. `++-+++`.
impl FromStr for ValueAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let signs: Vec<Sign> = s
            .chars()
            .map(|c| Sign::from_symbol(c).ok_or_else(|| Error::Parse(format!("bad sign {c:?} in {s:?}"))))
            .collect::<Result<_, _>>()?;
        if signs.len() != 6 {
            return Err(Error::Parse(format!("assignment needs 6 signs, got {}", signs.len())));
        }
        Ok(ValueAssignment {
            a: [signs[0], signs[1], signs[2]],
            b: [signs[3], signs[4], signs[5]],
        })
    }
}

/// `v(σ_{b1}) v(σ_{b2}) v(σ_{b3}) = target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParityConstraint {
    pub bases: [Basis; 3],
    pub target: Sign,
}

/// The four counterfactual conditions, in order `xxx → -1`, `xyy`, `yxy`, `yyx → +1`.
pub fn ghz_constraints() -> [ParityConstraint; 4] {
    use Basis::{X, Y};
    [
        ParityConstraint {
            bases: [X, X, X],
            target: Sign::Minus,
        },
        ParityConstraint {
            bases: [X, Y, Y],
            target: Sign::Plus,
        },
        ParityConstraint {
            bases: [Y, X, Y],
            target: Sign::Plus,
        },
        ParityConstraint {
            bases: [Y, Y, X],
            target: Sign::Plus,
        },
    ]
}

/// GHZ parity target for a canonical basis triple.
pub fn parity_target(bases: [Basis; 3]) -> Option<Sign> {
    ghz_constraints().iter().find(|c| c.bases == bases).map(|c| c.target)
}

pub fn satisfies(v: &ValueAssignment, c: &ParityConstraint) -> bool {
    let product = (0..3)
        .map(|j| v.value(j, c.bases[j]))
        .fold(Sign::Plus, |acc, s| acc * s);
    product == c.target
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssignmentRow {
    pub code: u8,
    pub assignment: ValueAssignment,
    /// Which of the four constraints hold.
    pub satisfied: [bool; 4],
    /// `A1 A2 A3`.
    pub a_product: Sign,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnumerationSummary {
    pub total: usize,
    pub per_constraint_counts: [usize; 4],
    /// Assignments satisfying the three `+1` constraints jointly.
    pub joint_123_count: usize,
    pub all_four_count: usize,
    /// Every assignment in code order with its per-constraint verdicts.
    pub witnesses: Vec<AssignmentRow>,
}

impl EnumerationSummary {
    /// Rows satisfying the three `+1` constraints.
    pub fn joint_123(&self) -> impl Iterator<Item = &AssignmentRow> {
        self.witnesses.iter().filter(|r| r.satisfied[1..].iter().all(|s| *s))
    }
}

/// Exhaustive check of all 2⁶ assignments against the four constraints.
pub fn enumerate_assignments() -> EnumerationSummary {
    let constraints = ghz_constraints();
    let mut per_constraint_counts = [0; 4];
    let mut joint_123_count = 0;
    let mut all_four_count = 0;
    let mut witnesses = Vec::with_capacity(64);
    for v in ValueAssignment::all() {
        let satisfied = constraints.map(|c| satisfies(&v, &c));
        for (count, ok) in per_constraint_counts.iter_mut().zip(satisfied) {
            *count += usize::from(ok);
        }
        if satisfied[1..].iter().all(|s| *s) {
            joint_123_count += 1;
            if satisfied[0] {
                all_four_count += 1;
            }
        }
        witnesses.push(AssignmentRow {
            code: v.code(),
            assignment: v,
            satisfied,
            a_product: v.a[0] * v.a[1] * v.a[2],
        });
    }
    EnumerationSummary {
        total: witnesses.len(),
        per_constraint_counts,
        joint_123_count,
        all_four_count,
        witnesses,
    }
}
