//! Discrete, bounded, linear time: points, periods and point sets.
//!
//! Time-points are the integers `0..size`. A [`Period`] is a non-empty closed
//! interval `[lo, hi]` of points; a [`PointSet`] is either a period or the
//! empty set, which is what localisation times and period expressions may
//! denote.

use std::fmt;

use thiserror::Error;

/// A time-point index on a [`Timeline`].
pub type Point = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TimeError {
    #[error("a timeline needs at least one point")]
    EmptyTimeline,
    #[error("period [{lo},{hi}] is reversed")]
    ReversedPeriod { lo: Point, hi: Point },
}

/// The point structure: points `0..size` ordered by numeric `<`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Timeline {
    size: usize,
}

impl Timeline {
    pub fn new(size: usize) -> Result<Self, TimeError> {
        if size == 0 {
            return Err(TimeError::EmptyTimeline);
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn first(&self) -> Point {
        0
    }

    pub fn last(&self) -> Point {
        self.size - 1
    }

    pub fn contains(&self, t: Point) -> bool {
        t < self.size
    }

    pub fn contains_period(&self, p: Period) -> bool {
        p.hi < self.size
    }

    /// The immediately following point, or `None` at the end of time.
    pub fn next(&self, t: Point) -> Option<Point> {
        (t < self.last()).then(|| t + 1)
    }

    /// The immediately preceding point, or `None` at the beginning of time.
    pub fn prev(&self, t: Point) -> Option<Point> {
        t.checked_sub(1)
    }

    /// The whole timeline as a period.
    pub fn all(&self) -> Period {
        Period { lo: 0, hi: self.last() }
    }

    /// Every period over the timeline, ordered by `(lo, hi)`.
    pub fn periods(&self) -> impl Iterator<Item = Period> + Clone {
        let size = self.size;
        (0..size).flat_map(move |lo| (lo..size).map(move |hi| Period { lo, hi }))
    }

    pub fn period_count(&self) -> usize {
        self.size * (self.size + 1) / 2
    }

    /// Every point set over the timeline: the empty set followed by all periods.
    pub fn point_sets(&self) -> impl Iterator<Item = PointSet> {
        std::iter::once(PointSet::Empty).chain(self.periods().map(PointSet::Period))
    }

    /// `{t | lo ≤ t ≤ hi}` clipped to the timeline, with signed bounds so that
    /// half-open forms can be normalised without underflow.
    pub fn closed_range(&self, lo: i64, hi: i64) -> PointSet {
        let lo = lo.max(0);
        let hi = hi.min(self.last() as i64);
        if lo > hi {
            PointSet::Empty
        } else {
            PointSet::Period(Period { lo: lo as Point, hi: hi as Point })
        }
    }
}

/// A non-empty convex set of time-points, stored as a closed interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Period {
    lo: Point,
    hi: Point,
}

impl Period {
    pub fn new(lo: Point, hi: Point) -> Result<Self, TimeError> {
        if lo > hi {
            return Err(TimeError::ReversedPeriod { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(t: Point) -> Self {
        Self { lo: t, hi: t }
    }

    /// Earliest point (`minpt`).
    pub fn lo(&self) -> Point {
        self.lo
    }

    /// Latest point (`maxpt`).
    pub fn hi(&self) -> Point {
        self.hi
    }

    /// Number of points; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, t: Point) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// `self ⊑ other`.
    pub fn is_subperiod_of(&self, other: &Period) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self ⊏ other`.
    pub fn is_proper_subperiod_of(&self, other: &Period) -> bool {
        self != other && self.is_subperiod_of(other)
    }

    /// True iff the union of the two periods is itself a period.
    pub fn union_is_convex(&self, other: &Period) -> bool {
        self.lo.max(other.lo) <= self.hi.min(other.hi) + 1
    }

    pub fn intersect(&self, other: &Period) -> PointSet {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            PointSet::Period(Period { lo, hi })
        } else {
            PointSet::Empty
        }
    }

    /// All subperiods, ordered by `(lo, hi)`.
    pub fn subperiods(&self) -> impl Iterator<Item = Period> {
        let (a, b) = (self.lo, self.hi);
        (a..=b).flat_map(move |lo| (lo..=b).map(move |hi| Period { lo, hi }))
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// A period or the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointSet {
    Empty,
    Period(Period),
}

impl PointSet {
    pub fn as_period(&self) -> Option<Period> {
        match self {
            PointSet::Empty => None,
            PointSet::Period(p) => Some(*p),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PointSet::Empty)
    }

    pub fn min_point(&self) -> Option<Point> {
        self.as_period().map(|p| p.lo)
    }

    pub fn max_point(&self) -> Option<Point> {
        self.as_period().map(|p| p.hi)
    }
}

impl From<Period> for PointSet {
    fn from(p: Period) -> Self {
        PointSet::Period(p)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSet::Empty => f.write_str("{}"),
            PointSet::Period(p) => p.fmt(f),
        }
    }
}

/// Set intersection of two point sets.
pub fn intersect(a: PointSet, b: PointSet) -> PointSet {
    match (a, b) {
        (PointSet::Period(x), PointSet::Period(y)) => x.intersect(&y),
        _ => PointSet::Empty,
    }
}

/// `a ⊑ b`: both are periods and `a ⊆ b`.
pub fn subper(a: PointSet, b: PointSet) -> bool {
    match (a, b) {
        (PointSet::Period(x), PointSet::Period(y)) => x.is_subperiod_of(&y),
        _ => false,
    }
}

/// The members of `set` not properly contained in another member.
pub fn mxlpers(set: &[Period]) -> Vec<Period> {
    let mut out: Vec<Period> = set
        .iter()
        .filter(|p| !set.iter().any(|q| p.is_proper_subperiod_of(q)))
        .copied()
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn per(lo: Point, hi: Point) -> Period {
        Period::new(lo, hi).unwrap()
    }

    fn ps(lo: Point, hi: Point) -> PointSet {
        PointSet::Period(per(lo, hi))
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(intersect(ps(2, 5), ps(4, 8)), ps(4, 5));
        assert_eq!(intersect(ps(2, 3), ps(5, 6)), PointSet::Empty);
        assert_eq!(intersect(ps(3, 7), ps(3, 7)), ps(3, 7));
        assert_eq!(intersect(PointSet::Empty, ps(0, 9)), PointSet::Empty);
    }

    #[test]
    fn subper_examples() {
        assert!(subper(ps(3, 4), ps(2, 5)));
        assert!(!subper(ps(2, 5), ps(3, 4)));
        assert!(!subper(PointSet::Empty, ps(0, 9)));
        assert!(!subper(ps(0, 9), PointSet::Empty));
    }

    #[test]
    fn mxlpers_examples() {
        assert_eq!(mxlpers(&[per(1, 3), per(2, 3), per(5, 6)]), vec![per(1, 3), per(5, 6)]);
        assert_eq!(mxlpers(&[]), Vec::<Period>::new());
        assert_eq!(mxlpers(&[per(0, 9)]), vec![per(0, 9)]);
    }

    #[test]
    fn next_and_prev_are_bounded() {
        let tl = Timeline::new(10).unwrap();
        assert_eq!(tl.next(3), Some(4));
        assert_eq!(tl.next(9), None);
        assert_eq!(tl.prev(0), None);
        assert_eq!(tl.prev(5), Some(4));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert_eq!(Timeline::new(0), Err(TimeError::EmptyTimeline));
        assert!(Period::new(4, 3).is_err());
    }

    #[test]
    fn closed_range_normalises() {
        let tl = Timeline::new(10).unwrap();
        // [beg, now) with now = 7
        assert_eq!(tl.closed_range(0, 6), ps(0, 6));
        assert_eq!(tl.closed_range(0, -1), PointSet::Empty);
        assert_eq!(tl.closed_range(8, 12), ps(8, 9));
    }

    #[test]
    fn period_enumeration_order() {
        let tl = Timeline::new(3).unwrap();
        let all: Vec<_> = tl.periods().collect();
        assert_eq!(all, vec![per(0, 0), per(0, 1), per(0, 2), per(1, 1), per(1, 2), per(2, 2)]);
        assert_eq!(all.len(), tl.period_count());
    }

    // Exhaustive algebraic laws on small timelines.
    #[test]
    fn intersect_and_subper_laws_exhaustive() {
        for size in 1..=6 {
            let tl = Timeline::new(size).unwrap();
            let sets: Vec<PointSet> = tl.point_sets().collect();
            for &a in &sets {
                assert_eq!(intersect(a, a), a);
                for &b in &sets {
                    let ab = intersect(a, b);
                    assert_eq!(ab, intersect(b, a));
                    // convexity: every point between two members is a member
                    let members: Vec<Point> =
                        (0..size).filter(|&t| in_set(a, t) && in_set(b, t)).collect();
                    match ab {
                        PointSet::Empty => assert!(members.is_empty()),
                        PointSet::Period(p) => {
                            assert_eq!(members, (p.lo()..=p.hi()).collect::<Vec<_>>())
                        }
                    }
                    for &c in &sets {
                        assert_eq!(intersect(ab, c), intersect(a, intersect(b, c)));
                        if subper(a, b) && subper(b, c) {
                            assert!(subper(a, c));
                        }
                    }
                    if subper(a, b) && subper(b, a) {
                        assert_eq!(a, b);
                    }
                }
                if let PointSet::Period(_) = a {
                    assert!(subper(a, a));
                }
            }
        }
    }

    fn in_set(s: PointSet, t: Point) -> bool {
        s.as_period().is_some_and(|p| p.contains(t))
    }

    #[test]
    fn mxlpers_properties_exhaustive() {
        let tl = Timeline::new(4).unwrap();
        let periods: Vec<Period> = tl.periods().collect();
        // every subset of the 10 periods of a 4-point timeline
        for mask in 0u32..(1 << periods.len()) {
            let set: Vec<Period> = periods
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| *p)
                .collect();
            let maximal = mxlpers(&set);
            for p in &maximal {
                assert!(set.contains(p));
                assert!(!set.iter().any(|q| p.is_proper_subperiod_of(q)));
            }
            for q in set.iter().filter(|q| !maximal.contains(q)) {
                assert!(maximal.iter().any(|p| q.is_proper_subperiod_of(p)));
            }
        }
    }
}
