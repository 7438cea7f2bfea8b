//! Annealing schedules `A(s)`, `B(s)`.

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleValue {
    pub a: f64,
    pub b: f64,
    pub da: f64,
    pub db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// `A(s) = 1 - s`, `B(s) = s`.
    Linear,
    /// Samples `(s, A, B)`, interpolated piecewise linearly.
    Tabulated(Vec<(f64, f64, f64)>),
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Linear
    }
}

impl Schedule {
    /// Samples must be strictly increasing in `s`, start at 0, end at 1, with
    /// `A(0) > 0` and `B(1) > 0`.
    pub fn tabulated(samples: Vec<(f64, f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("a tabulated schedule needs at least two samples"));
        }
        if samples.iter().any(|&(s, a, b)| !(s.is_finite() && a.is_finite() && b.is_finite())) {
            return Err(Error::NonFiniteCoefficient);
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid("schedule samples must be strictly increasing in s"));
        }
        let first = samples[0];
        let last = samples[samples.len() - 1];
        if first.0 != 0.0 || last.0 != 1.0 {
            return Err(Error::invalid("schedule samples must cover [0, 1]"));
        }
        if !(first.1 > 0.0) || !(last.2 > 0.0) {
            return Err(Error::invalid("schedule needs A(0) > 0 and B(1) > 0"));
        }
        Ok(Schedule::Tabulated(samples))
    }

    /// `(A, B, dA/ds, dB/ds)` at `s`. Tabulated slopes are piecewise constant;
    /// at an interior sample the slope of the segment to its right is used.
    pub fn eval(&self, s: f64) -> Result<ScheduleValue> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::ScheduleDomain { s });
        }
        match self {
            Schedule::Linear => Ok(ScheduleValue { a: 1.0 - s, b: s, da: -1.0, db: 1.0 }),
            Schedule::Tabulated(t) => {
                let seg = t.partition_point(|&(x, _, _)| x <= s).clamp(1, t.len() - 1) - 1;
                let (s0, a0, b0) = t[seg];
                let (s1, a1, b1) = t[seg + 1];
                let da = (a1 - a0) / (s1 - s0);
                let db = (b1 - b0) / (s1 - s0);
                Ok(ScheduleValue { a: a0 + da * (s - s0), b: b0 + db * (s - s0), da, db })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn linear_values() {
        assert_eq!(
            Schedule::Linear.eval(0.25).unwrap(),
            ScheduleValue { a: 0.75, b: 0.25, da: -1.0, db: 1.0 }
        );
        assert_eq!(Schedule::Linear.eval(1.0).unwrap(), ScheduleValue { a: 0.0, b: 1.0, da: -1.0, db: 1.0 });
        assert!(matches!(Schedule::Linear.eval(1.5), Err(Error::ScheduleDomain { .. })));
        assert!(Schedule::Linear.eval(-0.1).is_err());
    }

    #[test]
    fn tabulated_interpolation() {
        let sch = Schedule::tabulated(vec![(0.0, 1.0, 0.0), (0.5, 0.5, 0.2), (1.0, 0.0, 1.0)]).unwrap();
        let v = sch.eval(0.25).unwrap();
        assert!((v.a - 0.75).abs() < 1e-15);
        assert!((v.b - 0.1).abs() < 1e-15);
        assert!((v.da + 1.0).abs() < 1e-15);
        assert!((v.db - 0.4).abs() < 1e-15);
        let end = sch.eval(1.0).unwrap();
        assert_eq!((end.a, end.b), (0.0, 1.0));
        assert!((end.db - 1.6).abs() < 1e-15);
        let mid = sch.eval(0.5).unwrap();
        assert_eq!((mid.a, mid.b), (0.5, 0.2));
    }

    #[test]
    fn tabulated_validation() {
        assert!(Schedule::tabulated(vec![(0.0, 1.0, 0.0)]).is_err());
        assert!(Schedule::tabulated(vec![(0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]).is_err());
        assert!(Schedule::tabulated(vec![(0.1, 1.0, 0.0), (1.0, 0.0, 1.0)]).is_err());
        assert!(Schedule::tabulated(vec![(0.0, 0.0, 0.0), (1.0, 0.0, 1.0)]).is_err());
        assert!(Schedule::tabulated(vec![(0.0, 1.0, 0.0), (1.0, 1.0, 0.0)]).is_err());
    }
}
