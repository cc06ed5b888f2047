use crate::archive::BiArchive;
use crate::dominance::ObjectivePair;

/// Area of the union of boxes `[f1, r1] x [f2, r2]` over all points.
///
/// Works on any point set: points are swept by increasing `f1` and only the
/// ones lowering the running `f2` minimum contribute. Points not strictly
/// below the reference in both objectives contribute nothing.
pub fn hypervolume(points: &[ObjectivePair], reference: ObjectivePair) -> f64 {
    let mut pts: Vec<ObjectivePair> = points
        .iter()
        .copied()
        .filter(|p| p.f1 < reference.f1 && p.f2 < reference.f2)
        .collect();
    pts.sort_by(|a, b| a.f1.total_cmp(&b.f1).then(a.f2.total_cmp(&b.f2)));
    let mut area = 0.0;
    let mut level = reference.f2;
    for p in pts {
        if p.f2 < level {
            area += (reference.f1 - p.f1) * (level - p.f2);
            level = p.f2;
        }
    }
    area
}

pub fn archive_hypervolume(archive: &BiArchive, reference: ObjectivePair) -> f64 {
    hypervolume(&archive.objectives(), reference)
}
