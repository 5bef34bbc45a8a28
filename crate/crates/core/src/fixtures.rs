//! Hand-built instances reused by tests, verifiers and generators.

use crate::dinterval::DIntervalFamily;
use crate::geom::{Point, Rect};
use crate::trace::Instance;
use crate::verify::PTInstance;

/// Three rectangles that pairwise share exactly one point of `P`, with no
/// point in the common core: the smallest family with trace piercing
/// number 2.
///
/// `P = {(0,-3), (-3,0), (3,0)}`; the common intersection is `[-1,1]^2`.
pub fn triangle() -> Instance<i64> {
    Instance::new(
        vec![Point::new(0, -3), Point::new(-3, 0), Point::new(3, 0)],
        vec![
            Rect::new(-4, 1, -4, 1).unwrap(),
            Rect::new(-1, 4, -4, 1).unwrap(),
            Rect::new(-4, 4, -1, 4).unwrap(),
        ],
    )
}

/// Three pairwise-intersecting 2-interval members meeting pairwise on
/// distinct points with no common point: tau = 2 = (d^2 - d) * nu, so the
/// d = 2 bound is tight here.
pub fn dinterval_triangle() -> DIntervalFamily {
    DIntervalFamily::new(
        2,
        vec![2, 1],
        vec![
            vec![Some((0, 0)), Some((0, 0))],
            vec![Some((0, 1)), None],
            vec![Some((1, 1)), Some((0, 0))],
        ],
    )
    .unwrap()
}

fn pt_boxes() -> (Vec<Point<i64>>, Vec<Rect<i64>>, Vec<usize>) {
    let points =
        vec![Point::new(0, 0), Point::new(10, 0), Point::new(0, 10), Point::new(10, 10)];
    let mut rects = Vec::new();
    let mut classes = Vec::new();
    for class in 0..3usize {
        let h = 1 + class as i64;
        for p in &points {
            rects.push(Rect::new(p.x - h, p.x + h, p.y - h, p.y + h).unwrap());
            classes.push(class);
        }
    }
    (points, rects, classes)
}

/// Valid lower-bound witness structure with d = 2, r = 1: three classes of
/// four pairwise-disjoint rectangles, each rectangle containing exactly one
/// of the four points.
pub fn pt_valid() -> PTInstance {
    let (points, rects, classes) = pt_boxes();
    PTInstance { d: 2, r: 1, points, rects, classes }
}

/// Corruption: two rectangles of class 0 overlap (point counts stay valid).
pub fn pt_overlapping_class() -> PTInstance {
    let mut pt = pt_valid();
    // Touches the classmate around (10, 0) at x = 9 without gaining points.
    pt.rects[0] = Rect::new(-1, 9, -1, 1).unwrap();
    pt
}

/// Corruption: one rectangle contains no point at all.
pub fn pt_wrong_point_count() -> PTInstance {
    let mut pt = pt_valid();
    pt.rects[0] = Rect::new(1, 2, -1, 1).unwrap();
    pt
}

/// Corruption: a member is relabelled, so class sizes are off.
pub fn pt_wrong_class_sizes() -> PTInstance {
    let mut pt = pt_valid();
    pt.classes[0] = 1;
    pt
}
