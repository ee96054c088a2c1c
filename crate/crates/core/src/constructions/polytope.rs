use crate::classifier::{Label, LabeledPrototypeSet};
use crate::error::{Error, Result};
use crate::geometry::{check_dim, reflect, ConvexPolytope, Point, DEFAULT_TOL};

/// Prototypes whose 1NN decision region for `inside_label` is exactly `poly`:
/// `interior` itself plus its reflection in every facet hyperplane, labeled
/// the other way.
pub fn polytope_to_prototypes(
    poly: &ConvexPolytope,
    interior: &Point,
    inside_label: Label,
) -> Result<LabeledPrototypeSet> {
    check_dim(interior.dim(), poly.dim())?;
    let slack = poly.min_slack(interior);
    if !(slack > DEFAULT_TOL) {
        return Err(Error::InvalidWitness(format!(
            "interior point is not strictly inside the polytope (slack {slack:e})"
        )));
    }
    let mut prototypes = Vec::with_capacity(poly.facets().len() + 1);
    let mut labels = Vec::with_capacity(poly.facets().len() + 1);
    prototypes.push(interior.clone());
    labels.push(inside_label);
    for h in poly.facets() {
        prototypes.push(reflect(interior, h)?);
        labels.push(inside_label.flip());
    }
    LabeledPrototypeSet::new(prototypes, labels)
}
