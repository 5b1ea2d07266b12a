use serde::{Deserialize, Serialize};

use crate::family::FamilySpec;
use crate::game::{Outcome, Role};

/// A claimed result, possibly phrased in terms of move order rather than
/// roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedOutcome {
    Outcome(Outcome),
    PlayerTwoWins,
    PlayerOneWins,
    /// An unproven claim, already resolved for the given first role.
    Conjectured(Outcome),
    Unknown,
}

impl ExpectedOutcome {
    pub fn resolve(self, first_role: Role) -> Option<Outcome> {
        match self {
            ExpectedOutcome::Outcome(o) | ExpectedOutcome::Conjectured(o) => Some(o),
            ExpectedOutcome::PlayerOneWins => Some(first_role.wins()),
            ExpectedOutcome::PlayerTwoWins => Some(first_role.other().wins()),
            ExpectedOutcome::Unknown => None,
        }
    }

    pub fn is_conjecture(self) -> bool {
        matches!(self, ExpectedOutcome::Conjectured(_))
    }
}

/// The known result for a family instance, encoded as data.
pub fn expected_outcome(spec: &FamilySpec, first_role: Role) -> ExpectedOutcome {
    use ExpectedOutcome::*;
    if spec.validate().is_err() {
        return Unknown;
    }
    match spec {
        FamilySpec::Complete(n) => complete(*n, first_role),
        FamilySpec::Star(n) => {
            if n % 2 == 0 {
                Outcome(crate::game::Outcome::Draw)
            } else {
                PlayerTwoWins
            }
        }
        FamilySpec::StarForest(leaves) => {
            let even = leaves.iter().filter(|&&l| l % 2 == 0).count();
            if even == leaves.len() {
                Outcome(crate::game::Outcome::Draw)
            } else if even % 2 == 0 {
                PlayerTwoWins
            } else {
                PlayerOneWins
            }
        }
        FamilySpec::CompleteMultipartite(parts) => match parts.as_slice() {
            [m, n] => {
                if m % 2 == 1 && n % 2 == 1 {
                    PlayerTwoWins
                } else {
                    Outcome(crate::game::Outcome::Draw)
                }
            }
            [_, _, _] => match conjecture_case(parts) {
                ConjectureCase::AllOdd => Conjectured(crate::game::Outcome::NWins),
                ConjectureCase::OneEven => Conjectured(first_role.other().wins()),
                ConjectureCase::TwoOrMoreEven => Conjectured(crate::game::Outcome::Draw),
            },
            _ => Unknown,
        },
        FamilySpec::Path(n) => {
            if n % 2 == 1 {
                Outcome(crate::game::Outcome::Draw)
            } else {
                PlayerTwoWins
            }
        }
        FamilySpec::Cycle(n) => match n % 4 {
            0 => Outcome(crate::game::Outcome::Draw),
            1 => Outcome(crate::game::Outcome::PWins),
            2 => PlayerTwoWins,
            _ => Outcome(crate::game::Outcome::NWins),
        },
        FamilySpec::Arbitrary(_) => Unknown,
    }
}

fn complete(n: usize, first_role: Role) -> ExpectedOutcome {
    match (first_role, n) {
        (Role::N, 2) => ExpectedOutcome::Outcome(Outcome::PWins),
        (Role::N, 4) => ExpectedOutcome::Outcome(Outcome::Draw),
        _ => ExpectedOutcome::Outcome(Outcome::NWins),
    }
}

/// The three parity cases of the tripartite claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureCase {
    AllOdd,
    OneEven,
    TwoOrMoreEven,
}

pub fn conjecture_case(parts: &[usize]) -> ConjectureCase {
    match parts.iter().filter(|&&p| p % 2 == 0).count() {
        0 => ConjectureCase::AllOdd,
        1 => ConjectureCase::OneEven,
        _ => ConjectureCase::TwoOrMoreEven,
    }
}
