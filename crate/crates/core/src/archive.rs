//! Sorted archive of mutually non-dominated objective pairs.

use crate::dominance::ObjectivePair;
use crate::linalg::Point;

#[derive(Clone, Debug)]
pub struct ArchiveEntry {
    pub f: ObjectivePair,
    pub x: Option<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted { evicted: usize },
    Rejected,
}

impl InsertOutcome {
    pub fn inserted(&self) -> bool {
        matches!(self, InsertOutcome::Inserted { .. })
    }
}

/// Bi-objective non-dominated archive kept sorted by strictly increasing `f1`
/// (and therefore strictly decreasing `f2`).
#[derive(Clone, Debug, Default)]
pub struct BiArchive {
    entries: Vec<ArchiveEntry>,
    duplicate_tol: f64,
}

impl BiArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Additionally rejects candidates within `tol` of an entry in both components.
    pub fn with_duplicate_tolerance(tol: f64) -> Self {
        BiArchive { entries: Vec::new(), duplicate_tol: tol }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn objectives(&self) -> Vec<ObjectivePair> {
        self.entries.iter().map(|e| e.f).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.entries.iter().filter_map(|e| e.x.as_ref())
    }

    pub fn into_entries(self) -> Vec<ArchiveEntry> {
        self.entries
    }

    /// True if some entry dominates or equals `f`.
    pub fn is_covered(&self, f: &ObjectivePair) -> bool {
        let idx = self.entries.partition_point(|e| e.f.f1 <= f.f1);
        idx > 0 && self.entries[idx - 1].f.f2 <= f.f2
    }

    fn is_duplicate(&self, f: &ObjectivePair) -> bool {
        if self.duplicate_tol <= 0.0 {
            return false;
        }
        let lo = self.entries.partition_point(|e| e.f.f1 < f.f1 - self.duplicate_tol);
        self.entries[lo..]
            .iter()
            .take_while(|e| e.f.f1 <= f.f1 + self.duplicate_tol)
            .any(|e| (e.f.f2 - f.f2).abs() <= self.duplicate_tol)
    }

    /// Inserts `f` unless an entry dominates or equals it, evicting every
    /// entry that `f` dominates.
    pub fn insert(&mut self, f: ObjectivePair, x: Option<Point>) -> InsertOutcome {
        debug_assert!(f.is_finite());
        if self.is_covered(&f) || self.is_duplicate(&f) {
            return InsertOutcome::Rejected;
        }
        // Dominated entries have f1 >= f.f1 and f2 >= f.f2; they are contiguous
        // because f2 decreases along the archive.
        let start = self.entries.partition_point(|e| e.f.f1 < f.f1);
        let mut end = start;
        while end < self.entries.len() && self.entries[end].f.f2 >= f.f2 {
            end += 1;
        }
        let evicted = end - start;
        self.entries.splice(start..end, std::iter::once(ArchiveEntry { f, x }));
        InsertOutcome::Inserted { evicted }
    }

    /// Checks the sorted and mutual non-domination invariants.
    pub fn is_consistent(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].f.f1 < w[1].f.f1 && w[0].f.f2 > w[1].f.f2)
    }

    pub fn ideal(&self) -> Option<ObjectivePair> {
        Some(ObjectivePair::new(self.entries.first()?.f.f1, self.entries.last()?.f.f2))
    }

    pub fn nadir(&self) -> Option<ObjectivePair> {
        Some(ObjectivePair::new(self.entries.last()?.f.f1, self.entries.first()?.f.f2))
    }
}

/// Brute-force non-dominated filter; keeps the first of exact duplicates.
pub fn nondominated_filter(points: &[ObjectivePair]) -> Vec<ObjectivePair> {
    use crate::dominance::{dominates, Dominance};
    let mut out: Vec<ObjectivePair> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let beaten = points.iter().enumerate().any(|(j, q)| match dominates(q, p) {
            Dominance::Dominates => true,
            Dominance::Equal => j < i,
            _ => false,
        });
        if !beaten {
            out.push(*p);
        }
    }
    out.sort_by(|a, b| a.f1.total_cmp(&b.f1));
    out
}
