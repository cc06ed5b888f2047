use serde::{Deserialize, Serialize};

/// A pair of objective values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePair {
    pub f1: f64,
    pub f2: f64,
}

impl ObjectivePair {
    pub const fn new(f1: f64, f2: f64) -> Self {
        ObjectivePair { f1, f2 }
    }

    pub fn is_finite(&self) -> bool {
        self.f1.is_finite() && self.f2.is_finite()
    }

    pub fn componentwise_min(&self, other: &Self) -> Self {
        ObjectivePair::new(self.f1.min(other.f1), self.f2.min(other.f2))
    }

    pub fn componentwise_max(&self, other: &Self) -> Self {
        ObjectivePair::new(self.f1.max(other.f1), self.f2.max(other.f2))
    }
}

impl From<(f64, f64)> for ObjectivePair {
    fn from((f1, f2): (f64, f64)) -> Self {
        ObjectivePair { f1, f2 }
    }
}

/// Outcome of comparing `a` against `b` under minimization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dominance {
    /// `a` is no worse in both objectives and strictly better in one.
    Dominates,
    /// Identical objective vectors.
    Equal,
    Incomparable,
    /// `b` dominates `a`.
    Dominated,
}

pub fn dominates(a: &ObjectivePair, b: &ObjectivePair) -> Dominance {
    let a_le = a.f1 <= b.f1 && a.f2 <= b.f2;
    let b_le = b.f1 <= a.f1 && b.f2 <= a.f2;
    match (a_le, b_le) {
        (true, true) => Dominance::Equal,
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::Dominated,
        (false, false) => Dominance::Incomparable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = ObjectivePair::new;
        assert_eq!(dominates(&p(1.0, 2.0), &p(2.0, 2.0)), Dominance::Dominates);
        assert_eq!(dominates(&p(1.0, 2.0), &p(2.0, 1.0)), Dominance::Incomparable);
        assert_eq!(dominates(&p(1.0, 2.0), &p(1.0, 2.0)), Dominance::Equal);
        assert_eq!(dominates(&p(2.0, 2.0), &p(1.0, 2.0)), Dominance::Dominated);
    }
}
