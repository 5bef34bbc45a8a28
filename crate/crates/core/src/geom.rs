//! Closed axis-parallel rectangles, points, and quadrant classification.
//!
//! Everything here is comparison-only: no coordinate arithmetic is performed,
//! so these operations cannot overflow for any scalar.

use crate::CoordNum;

/// A point in the plane.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<C> {
    pub x: C,
    pub y: C,
}

impl<C: CoordNum> Point<C> {
    pub fn new(x: C, y: C) -> Self {
        Point { x, y }
    }
}

impl<C: std::fmt::Debug> std::fmt::Debug for Point<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

/// A closed axis-parallel rectangle `[x_lo, x_hi] x [y_lo, y_hi]`.
///
/// Invariant: `x_lo <= x_hi` and `y_lo <= y_hi`. Degenerate rectangles
/// (segments, single points) are allowed.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect<C> {
    x_lo: C,
    x_hi: C,
    y_lo: C,
    y_hi: C,
}

/// Constructor rejection for an empty interval.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rectangle: lo endpoint exceeds hi endpoint")]
pub struct InvalidRect;

impl<C: CoordNum> Rect<C> {
    pub fn new(x_lo: C, x_hi: C, y_lo: C, y_hi: C) -> Result<Self, InvalidRect> {
        if x_lo > x_hi || y_lo > y_hi {
            return Err(InvalidRect);
        }
        Ok(Rect { x_lo, x_hi, y_lo, y_hi })
    }

    pub fn x_lo(&self) -> C {
        self.x_lo
    }
    pub fn x_hi(&self) -> C {
        self.x_hi
    }
    pub fn y_lo(&self) -> C {
        self.y_lo
    }
    pub fn y_hi(&self) -> C {
        self.y_hi
    }

    pub fn contains(&self, p: Point<C>) -> bool {
        self.x_lo <= p.x && p.x <= self.x_hi && self.y_lo <= p.y && p.y <= self.y_hi
    }

    /// Corner with the smallest coordinates.
    pub fn lo_corner(&self) -> Point<C> {
        Point::new(self.x_lo, self.y_lo)
    }
}

impl<C: std::fmt::Debug> std::fmt::Debug for Rect<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{:?}, {:?}] x [{:?}, {:?}]",
            self.x_lo, self.x_hi, self.y_lo, self.y_hi
        )
    }
}

/// Do two closed rectangles share at least one point?
pub fn rects_intersect<C: CoordNum>(a: &Rect<C>, b: &Rect<C>) -> bool {
    a.x_lo <= b.x_hi && b.x_lo <= a.x_hi && a.y_lo <= b.y_hi && b.y_lo <= a.y_hi
}

/// Intersection of a whole family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommonIntersection<C> {
    /// The family itself was empty; the intersection is undefined.
    EmptyFamily,
    /// The family has no common point.
    Empty,
    /// The common intersection, itself a rectangle.
    NonEmpty(Rect<C>),
}

impl<C> CommonIntersection<C> {
    pub fn as_rect(&self) -> Option<&Rect<C>> {
        match self {
            CommonIntersection::NonEmpty(r) => Some(r),
            _ => None,
        }
    }
}

/// Fold of pairwise intersections over the family.
pub fn common_intersection<C: CoordNum>(rects: &[Rect<C>]) -> CommonIntersection<C> {
    let Some(first) = rects.first() else {
        return CommonIntersection::EmptyFamily;
    };
    let mut acc = *first;
    for r in &rects[1..] {
        acc.x_lo = acc.x_lo.max(r.x_lo);
        acc.x_hi = acc.x_hi.min(r.x_hi);
        acc.y_lo = acc.y_lo.max(r.y_lo);
        acc.y_hi = acc.y_hi.min(r.y_hi);
        if acc.x_lo > acc.x_hi || acc.y_lo > acc.y_hi {
            return CommonIntersection::Empty;
        }
    }
    CommonIntersection::NonEmpty(acc)
}

/// Quadrant label relative to an origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrant {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4];

    pub fn index(self) -> usize {
        match self {
            Quadrant::Q1 => 0,
            Quadrant::Q2 => 1,
            Quadrant::Q3 => 2,
            Quadrant::Q4 => 3,
        }
    }

    /// Membership in the *closed* quadrant (axes belong to both neighbours).
    ///
    /// This is the membership notion theorem hypotheses are stated in;
    /// [`classify_quadrant`] is the disjoint labelling used to build chains.
    pub fn contains_closed<C: CoordNum>(self, p: Point<C>, origin: Point<C>) -> bool {
        let xe = p.x >= origin.x; // dx >= 0
        let xw = p.x <= origin.x;
        let yn = p.y >= origin.y; // dy >= 0
        let ys = p.y <= origin.y;
        match self {
            Quadrant::Q1 => xe && yn,
            Quadrant::Q2 => xw && yn,
            Quadrant::Q3 => xw && ys,
            Quadrant::Q4 => xe && ys,
        }
    }
}

/// Unique quadrant label of `p` relative to `origin`.
///
/// Ties on the axes resolve east/north-first: `dx >= 0, dy >= 0 -> Q1`;
/// `dx < 0, dy >= 0 -> Q2`; `dx < 0, dy < 0 -> Q3`; `dx >= 0, dy < 0 -> Q4`.
/// Every point gets exactly one label, and the label's closed quadrant
/// always contains the point.
pub fn classify_quadrant<C: CoordNum>(p: Point<C>, origin: Point<C>) -> Quadrant {
    let east = p.x >= origin.x;
    let north = p.y >= origin.y;
    match (east, north) {
        (true, true) => Quadrant::Q1,
        (false, true) => Quadrant::Q2,
        (false, false) => Quadrant::Q3,
        (true, false) => Quadrant::Q4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Rect<i64> {
        Rect::new(x_lo, x_hi, y_lo, y_hi).unwrap()
    }

    // Independent 1d overlap check used as the reference for intersection
    // tests: closed intervals [a,b], [c,d] overlap iff max(a,c) <= min(b,d).
    fn overlap_1d(a: i64, b: i64, c: i64, d: i64) -> bool {
        a.max(c) <= b.min(d)
    }

    fn intersect_ref(a: &Rect<i64>, b: &Rect<i64>) -> bool {
        overlap_1d(a.x_lo(), a.x_hi(), b.x_lo(), b.x_hi())
            && overlap_1d(a.y_lo(), a.y_hi(), b.y_lo(), b.y_hi())
    }

    #[test]
    fn rect_constructor_rejects_inverted_intervals() {
        assert!(Rect::new(1i64, 0, 0, 1).is_err());
        assert!(Rect::new(0i64, 1, 1, 0).is_err());
        assert!(Rect::new(0i64, 0, 0, 0).is_ok());
    }

    #[test]
    fn touching_boundaries_intersect() {
        let a = r(0, 1, 0, 1);
        let b = r(1, 2, 1, 2);
        assert!(rects_intersect(&a, &b));
        assert_eq!(rects_intersect(&a, &b), intersect_ref(&a, &b));
    }

    #[test]
    fn separated_rects_do_not_intersect() {
        let a = r(0, 1, 0, 1);
        let b = r(2, 3, 0, 1);
        assert!(!rects_intersect(&a, &b));
        assert_eq!(rects_intersect(&a, &b), intersect_ref(&a, &b));
    }

    #[test]
    fn triangle_fixture_rects_pairwise_intersect() {
        let r1 = r(-4, 1, -4, 1);
        let r2 = r(-1, 4, -4, 1);
        let r3 = r(-4, 4, -1, 4);
        for (a, b) in [(&r1, &r2), (&r1, &r3), (&r2, &r3)] {
            assert!(rects_intersect(a, b));
            assert_eq!(rects_intersect(a, b), intersect_ref(a, b));
        }
    }

    #[test]
    fn common_intersection_of_triangle_fixture() {
        let fam = [r(-4, 1, -4, 1), r(-1, 4, -4, 1), r(-4, 4, -1, 4)];
        assert_eq!(common_intersection(&fam), CommonIntersection::NonEmpty(r(-1, 1, -1, 1)));
    }

    #[test]
    fn common_intersection_singleton_is_identity() {
        let fam = [r(3, 5, -2, 7)];
        assert_eq!(common_intersection(&fam), CommonIntersection::NonEmpty(r(3, 5, -2, 7)));
    }

    #[test]
    fn common_intersection_disjoint_pair_is_empty() {
        let fam = [r(0, 1, 0, 1), r(2, 3, 0, 1)];
        assert_eq!(common_intersection(&fam), CommonIntersection::Empty);
    }

    #[test]
    fn common_intersection_empty_family_is_flagged() {
        let fam: [Rect<i64>; 0] = [];
        assert_eq!(common_intersection(&fam), CommonIntersection::EmptyFamily);
    }

    #[test]
    fn classify_quadrant_examples() {
        let o = Point::new(0i64, 0);
        assert_eq!(classify_quadrant(Point::new(3, 0), o), Quadrant::Q1);
        assert_eq!(classify_quadrant(Point::new(-3, 0), o), Quadrant::Q2);
        assert_eq!(classify_quadrant(Point::new(0, -3), o), Quadrant::Q4);
        assert_eq!(classify_quadrant(Point::new(-1, -1), o), Quadrant::Q3);
        assert_eq!(classify_quadrant(o, o), Quadrant::Q1);
    }

    #[test]
    fn label_lies_in_its_closed_quadrant() {
        let o = Point::new(2i64, -1);
        for x in -4..4 {
            for y in -4..4 {
                let p = Point::new(x, y);
                let q = classify_quadrant(p, o);
                assert!(q.contains_closed(p, o));
                // Exactly one label.
                let labels = Quadrant::ALL.iter().filter(|&&c| classify_quadrant(p, o) == c).count();
                assert_eq!(labels, 1);
            }
        }
    }
}
