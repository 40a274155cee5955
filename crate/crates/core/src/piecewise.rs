//! Right-continuous step functions over a rational interval.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// A step function on `[lo, hi)`.
///
/// Piece `i` covers `[breaks[i], breaks[i + 1])` (the last one ends at `hi`)
/// and carries `values[i]`. The representation is canonical: `breaks[0] ==
/// lo`, breakpoints strictly increase and stay below `hi`, and adjacent
/// values differ. Evaluation outside the domain is decided by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseConstantFn {
    lo: Rational,
    hi: Rational,
    breaks: Vec<Rational>,
    values: Vec<Rational>,
}

/// Wire form used by the JSON formats: domain implied by context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFnRepr {
    pub breakpoints: Vec<Rational>,
    pub values: Vec<Rational>,
}

impl PiecewiseConstantFn {
    pub fn new(lo: Rational, hi: Rational, breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidInput(format!("empty domain [{lo}, {hi})")));
        }
        if breaks.len() != values.len() || breaks.is_empty() {
            return Err(Error::InvalidInput(
                "step function needs one value per breakpoint and at least one piece".into(),
            ));
        }
        if breaks[0] != lo {
            return Err(Error::InvalidInput(format!("first breakpoint {} must equal domain start {lo}", breaks[0])));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("breakpoints must strictly increase".into()));
        }
        if breaks.last().is_some_and(|b| *b >= hi) {
            return Err(Error::InvalidInput(format!("breakpoint beyond domain end {hi}")));
        }
        let mut f = PiecewiseConstantFn { lo, hi, breaks, values };
        f.canonicalize();
        Ok(f)
    }

    pub fn constant(lo: Rational, hi: Rational, value: Rational) -> Self {
        assert!(lo < hi, "empty domain");
        PiecewiseConstantFn { breaks: vec![lo.clone()], lo, hi, values: vec![value] }
    }

    /// `initial` from `lo`, switching to `v` at each `(t, v)`; switch times at
    /// or before `lo` override the start value, those at or after `hi` are
    /// dropped. Steps must be sorted by time.
    pub fn from_steps(lo: Rational, hi: Rational, initial: Rational, steps: &[(Rational, Rational)]) -> Self {
        let mut breaks = vec![lo.clone()];
        let mut values = vec![initial];
        for (t, v) in steps {
            if *t >= hi {
                break;
            }
            if *t <= lo {
                values[0] = v.clone();
            } else {
                debug_assert!(breaks.last().unwrap() < t, "steps must be sorted");
                breaks.push(t.clone());
                values.push(v.clone());
            }
        }
        let mut f = PiecewiseConstantFn { lo, hi, breaks, values };
        f.canonicalize();
        f
    }

    /// Sum of indicator pieces `value * [a, b)`, clipped to `[lo, hi)`; zero
    /// where no piece applies. Pieces may overlap.
    pub fn from_pieces(
        lo: Rational,
        hi: Rational,
        pieces: impl IntoIterator<Item = (Rational, Rational, Rational)>,
    ) -> Self {
        let mut deltas: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (a, b, v) in pieces {
            let a = a.max(lo.clone());
            let b = b.min(hi.clone());
            if a >= b || v.is_zero() {
                continue;
            }
            *deltas.entry(a).or_default() += &v;
            *deltas.entry(b).or_default() -= &v;
        }
        let mut breaks = vec![lo.clone()];
        let mut values = vec![Rational::zero()];
        let mut level = Rational::zero();
        for (t, d) in deltas {
            level += &d;
            if t >= hi {
                break;
            }
            if t == lo {
                values[0] = level.clone();
            } else {
                breaks.push(t);
                values.push(level.clone());
            }
        }
        let mut f = PiecewiseConstantFn { lo, hi, breaks, values };
        f.canonicalize();
        f
    }

    pub fn from_repr(lo: &Rational, hi: &Rational, repr: &StepFnRepr) -> Result<Self> {
        PiecewiseConstantFn::new(lo.clone(), hi.clone(), repr.breakpoints.clone(), repr.values.clone())
    }

    pub fn to_repr(&self) -> StepFnRepr {
        StepFnRepr { breakpoints: self.breaks.clone(), values: self.values.clone() }
    }

    fn canonicalize(&mut self) {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut values: Vec<Rational> = Vec::with_capacity(self.values.len());
        for (b, v) in self.breaks.drain(..).zip(self.values.drain(..)) {
            if values.last() != Some(&v) {
                breaks.push(b);
                values.push(v);
            }
        }
        self.breaks = breaks;
        self.values = values;
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Times at which the value changes.
    pub fn change_times(&self) -> &[Rational] {
        &self.breaks[1..]
    }

    /// Pieces as `(start, end, value)`.
    pub fn pieces(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> + '_ {
        (0..self.breaks.len()).map(move |i| {
            let end = self.breaks.get(i + 1).unwrap_or(&self.hi);
            (&self.breaks[i], end, &self.values[i])
        })
    }

    fn piece_index(&self, t: &Rational) -> Option<usize> {
        if *t < self.lo || *t >= self.hi {
            return None;
        }
        // last breakpoint <= t
        Some(self.breaks.partition_point(|b| b <= t) - 1)
    }

    /// Value at `t` inside the domain.
    pub fn value_at(&self, t: &Rational) -> Option<&Rational> {
        self.piece_index(t).map(|i| &self.values[i])
    }

    /// Limit from the left at `t`, for `lo < t <= hi`.
    pub fn value_before(&self, t: &Rational) -> Option<&Rational> {
        if *t <= self.lo || *t > self.hi {
            return None;
        }
        Some(&self.values[self.breaks.partition_point(|b| b < t) - 1])
    }

    pub fn eval(&self, t: &Rational, out_of_domain: &Rational) -> Rational {
        self.value_at(t).unwrap_or(out_of_domain).clone()
    }

    /// Exact integral over `[a, b]`, with zero outside the domain.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if a > b {
            return Err(Error::InvalidInput(format!("integration bounds reversed: {a} > {b}")));
        }
        let mut total = Rational::zero();
        for (s, e, v) in self.pieces() {
            if e <= a {
                continue;
            }
            if s >= b {
                break;
            }
            let lo = if s > a { s } else { a };
            let hi = if e < b { e } else { b };
            total += (hi - lo) * v;
        }
        Ok(total)
    }

    pub fn count_changes(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.breaks.len() == 1
    }

    pub fn min_value(&self) -> &Rational {
        self.values.iter().min().expect("nonempty")
    }

    pub fn max_value(&self) -> &Rational {
        self.values.iter().max().expect("nonempty")
    }

    pub fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let mut g = PiecewiseConstantFn {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            breaks: self.breaks.clone(),
            values: self.values.iter().map(f).collect(),
        };
        g.canonicalize();
        g
    }

    /// The function `g(r * t + offset) = f(t)`; `r` must be positive.
    pub fn affine_time(&self, r: &Rational, offset: &Rational) -> Self {
        assert!(r.is_positive(), "time scale must be positive");
        let map = |t: &Rational| r * t + offset;
        PiecewiseConstantFn {
            lo: map(&self.lo),
            hi: map(&self.hi),
            breaks: self.breaks.iter().map(map).collect(),
            values: self.values.clone(),
        }
    }

    /// Restriction to `[lo, hi)`, which must lie inside the domain.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<Self> {
        if lo < &self.lo || hi > &self.hi || lo >= hi {
            return Err(Error::InvalidInput(format!(
                "[{lo}, {hi}) is not a subinterval of [{}, {})",
                self.lo, self.hi
            )));
        }
        let start = self.piece_index(lo).expect("inside domain");
        let mut breaks = vec![lo.clone()];
        let mut values = vec![self.values[start].clone()];
        for i in start + 1..self.breaks.len() {
            if self.breaks[i] >= *hi {
                break;
            }
            breaks.push(self.breaks[i].clone());
            values.push(self.values[i].clone());
        }
        Ok(PiecewiseConstantFn { lo: lo.clone(), hi: hi.clone(), breaks, values })
    }

    /// Extension to a larger domain, continuing the first and last values.
    pub fn extend(&self, lo: &Rational, hi: &Rational) -> Result<Self> {
        if lo > &self.lo || hi < &self.hi {
            return Err(Error::InvalidInput(format!("[{lo}, {hi}) does not contain [{}, {})", self.lo, self.hi)));
        }
        let mut breaks = self.breaks.clone();
        breaks[0] = lo.clone();
        Ok(PiecewiseConstantFn { lo: lo.clone(), hi: hi.clone(), breaks, values: self.values.clone() })
    }

    /// Pointwise combination on a shared domain.
    pub fn combine(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if self.lo != other.lo || self.hi != other.hi {
            return Err(Error::InvalidInput("combining step functions with different domains".into()));
        }
        let mut breaks: Vec<Rational> = self.breaks.iter().chain(other.breaks.iter()).cloned().collect();
        breaks.sort();
        breaks.dedup();
        let values = breaks.iter().map(|t| f(self.value_at(t).unwrap(), other.value_at(t).unwrap())).collect();
        let mut g = PiecewiseConstantFn { lo: self.lo.clone(), hi: self.hi.clone(), breaks, values };
        g.canonicalize();
        Ok(g)
    }
}
