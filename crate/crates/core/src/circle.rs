//! Circle-of-circumference-one arithmetic: points, arcs, arc unions, and
//! breakpoint cutting.
//!
//! Boundary points are measure zero and are excluded from every atom
//! carrier, so all containment questions are asked for interior points
//! (midpoints of elementary arcs) and the open/closed distinction never
//! reaches the combinatorics.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A circular arc `[start, start + length)` with `start` in `[0, 1)` and
/// `length` in `(0, 1]`. Arcs may wrap.
#[derive(Clone, Debug, PartialEq)]
pub struct Arc<T> {
    start: T,
    length: T,
}

impl<T: Scalar> Arc<T> {
    pub fn new(start: T, length: T) -> Result<Self> {
        if length <= T::zero() || length > T::one() {
            return Err(Error::invalid(format!(
                "arc length {length} must lie in (0, 1]"
            )));
        }
        Ok(Arc {
            start: start.mod_one(),
            length,
        })
    }

    /// Arc from `start` to `end` going counterclockwise; `start == end`
    /// denotes the full circle.
    pub fn from_endpoints(start: T, end: T) -> Result<Self> {
        let s = start.mod_one();
        let e = end.mod_one();
        let length = if s.circle_coincides(&e) {
            T::one()
        } else {
            (e - s.clone()).mod_one()
        };
        Arc::new(s, length)
    }

    pub fn start(&self) -> &T {
        &self.start
    }

    pub fn length(&self) -> &T {
        &self.length
    }

    pub fn end(&self) -> T {
        (self.start.clone() + self.length.clone()).mod_one()
    }

    pub fn is_full(&self) -> bool {
        self.length == T::one()
    }

    pub fn midpoint(&self) -> T {
        (self.start.clone() + self.length.half()).mod_one()
    }

    /// Interior containment of a point.
    pub fn contains_interior(&self, x: &T) -> bool {
        if self.is_full() {
            return true;
        }
        let offset = (x.clone() - self.start.clone()).mod_one();
        offset > T::zero() && offset < self.length
    }

    pub fn translate(&self, delta: &T) -> Arc<T> {
        Arc {
            start: (self.start.clone() + delta.clone()).mod_one(),
            length: self.length.clone(),
        }
    }
}

/// A normalized finite union of arcs: sorted by start, disjoint interiors,
/// touching arcs merged (boundary points carry no measure).
#[derive(Clone, Debug, PartialEq)]
pub struct ArcSet<T> {
    arcs: Vec<Arc<T>>,
}

impl<T: Scalar> ArcSet<T> {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet {
            arcs: vec![Arc {
                start: T::zero(),
                length: T::one(),
            }],
        }
    }

    pub fn new(arcs: Vec<Arc<T>>) -> Self {
        Self::normalize(arcs)
    }

    fn normalize(arcs: Vec<Arc<T>>) -> Self {
        if arcs.iter().any(Arc::is_full) {
            return Self::full();
        }
        // Unroll wrapping arcs into linear intervals on [0, 2).
        let mut intervals: Vec<(T, T)> = Vec::with_capacity(arcs.len());
        for a in arcs {
            let end = a.start.clone() + a.length.clone();
            intervals.push((a.start, end));
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(T, T)> = Vec::new();
        for (s, e) in intervals {
            match merged.last_mut() {
                Some((_, last_end)) if s < *last_end || s.coincides(last_end) => {
                    if e > *last_end {
                        *last_end = e;
                    }
                }
                _ => merged.push((s, e)),
            }
        }
        if merged.is_empty() {
            return Self::empty();
        }
        // Wrap-merge: an interval running past 1 continues at the front.
        let one = T::one();
        loop {
            let last_end = merged.last().unwrap().1.clone();
            if merged.len() < 2 || (last_end < one && !last_end.coincides(&one)) {
                break;
            }
            let overhang = last_end - one.clone();
            let first = merged.first().unwrap();
            if first.0 < overhang || first.0.coincides(&overhang) {
                let (_, fe) = merged.remove(0);
                let last = merged.last_mut().unwrap();
                let lifted = fe + one.clone();
                if lifted > last.1 {
                    last.1 = lifted;
                }
            } else {
                break;
            }
        }
        let mut out = Vec::with_capacity(merged.len());
        for (s, e) in merged {
            let length = e - s.clone();
            if length >= one {
                return Self::full();
            }
            if length > T::zero() && !length.coincides(&T::zero()) {
                out.push(Arc {
                    start: s.mod_one(),
                    length,
                });
            }
        }
        if out.is_empty() {
            Self::empty()
        } else {
            ArcSet { arcs: out }
        }
    }

    pub fn from_endpoint_pairs(pairs: &[(T, T)]) -> Result<Self> {
        let arcs = pairs
            .iter()
            .map(|(s, e)| Arc::from_endpoints(s.clone(), e.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(arcs))
    }

    pub fn arcs(&self) -> &[Arc<T>] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    pub fn measure(&self) -> T {
        let mut acc = T::Acc::default();
        for a in &self.arcs {
            T::acc_add(&mut acc, &a.length);
        }
        T::acc_total(&acc)
    }

    pub fn translate(&self, delta: &T) -> ArcSet<T> {
        ArcSet {
            arcs: self.arcs.iter().map(|a| a.translate(delta)).collect(),
        }
    }

    pub fn contains_interior(&self, x: &T) -> bool {
        self.arcs.iter().any(|a| a.contains_interior(x))
    }

    pub fn intersect(&self, other: &ArcSet<T>) -> ArcSet<T> {
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        let mut pieces = Vec::new();
        let one = T::one();
        for a in &self.arcs {
            let (a0, a1) = (a.start.clone(), a.start.clone() + a.length.clone());
            for b in &other.arcs {
                for shift in [-1i64, 0, 1] {
                    let off = T::from_int(shift);
                    let b0 = b.start.clone() + off.clone();
                    let b1 = b0.clone() + b.length.clone();
                    let lo = if a0 > b0 { a0.clone() } else { b0 };
                    let hi = if a1 < b1 { a1.clone() } else { b1 };
                    let len = hi - lo.clone();
                    if len > T::zero() && !len.coincides(&T::zero()) {
                        let len = if len > one { one.clone() } else { len };
                        pieces.push(Arc {
                            start: lo.mod_one(),
                            length: len,
                        });
                    }
                }
            }
        }
        ArcSet::new(pieces)
    }

    /// Complement; boundary points are immaterial under the carrier
    /// convention, so the result is again an `ArcSet`.
    pub fn complement(&self) -> ArcSet<T> {
        if self.is_empty() {
            return ArcSet::full();
        }
        if self.is_full() {
            return ArcSet::empty();
        }
        let mut gaps = Vec::with_capacity(self.arcs.len());
        for i in 0..self.arcs.len() {
            let gap_start = self.arcs[i].end();
            let next_start = self.arcs[(i + 1) % self.arcs.len()].start.clone();
            let length = (next_start - gap_start.clone()).mod_one();
            if length > T::zero() && !length.coincides(&T::zero()) {
                gaps.push(Arc {
                    start: gap_start,
                    length,
                });
            }
        }
        ArcSet::new(gaps)
    }

    /// All endpoints, for breakpoint cutting.
    pub fn cut_points(&self) -> Vec<T> {
        let mut pts = Vec::with_capacity(2 * self.arcs.len());
        for a in &self.arcs {
            if !a.is_full() {
                pts.push(a.start.clone());
                pts.push(a.end());
            }
        }
        pts
    }
}

/// Cut the circle at the given points: returns the elementary open arcs
/// between consecutive distinct breakpoints (the atom carrier). With no
/// breakpoints the whole circle is the single atom.
pub fn cut_circle<T: Scalar>(points: &[T]) -> Vec<Arc<T>> {
    let mut pts: Vec<T> = points.iter().map(|p| p.mod_one()).collect();
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| a.circle_coincides(b));
    if pts.len() > 1 && pts[0].circle_coincides(pts.last().unwrap()) {
        pts.pop();
    }
    if pts.is_empty() {
        return vec![Arc {
            start: T::zero(),
            length: T::one(),
        }];
    }
    if pts.len() == 1 {
        return vec![Arc {
            start: pts[0].clone(),
            length: T::one(),
        }];
    }
    let mut arcs = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        let start = pts[i].clone();
        let next = pts[(i + 1) % pts.len()].clone();
        let length = (next - start.clone()).mod_one();
        if length > T::zero() && !length.coincides(&T::zero()) {
            arcs.push(Arc { start, length });
        }
    }
    arcs
}
