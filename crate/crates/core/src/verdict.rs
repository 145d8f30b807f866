use serde::Serialize;

/// Outcome of a membership decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail")]
pub enum MembershipVerdict<W> {
    Yes(W),
    /// Carries the condition that failed, with the offending value.
    No(String),
    Undecided(String),
}

impl<W> MembershipVerdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, MembershipVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, MembershipVerdict::No(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            MembershipVerdict::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MembershipVerdict::Yes(_) => "Yes",
            MembershipVerdict::No(_) => "No",
            MembershipVerdict::Undecided(_) => "Undecided",
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> MembershipVerdict<V> {
        match self {
            MembershipVerdict::Yes(w) => MembershipVerdict::Yes(f(w)),
            MembershipVerdict::No(c) => MembershipVerdict::No(c),
            MembershipVerdict::Undecided(r) => MembershipVerdict::Undecided(r),
        }
    }
}
