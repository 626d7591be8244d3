use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBoundParams {
    pub horizon: u64,
    pub n_states: u64,
    pub n_actions: u64,
    pub epsilon: f64,
    pub failure_prob: f64,
    pub renyi_alpha: f64,
    pub c: f64,
}

impl SampleBoundParams {
    pub fn beta(&self) -> f64 {
        self.renyi_alpha / (2.0 * (1.0 - self.renyi_alpha))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.horizon == 0 || self.n_states == 0 || self.n_actions == 0 {
            return bad("horizon, states and actions must be positive");
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be positive");
        }
        if !(self.failure_prob > 0.0 && self.failure_prob < 1.0) {
            return bad("failure probability must lie in (0, 1)");
        }
        if !(self.renyi_alpha > 0.0 && self.renyi_alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad("c must be positive");
        }
        Ok(())
    }
}

/// Trajectory count `c (H^2 S A / eps)^(2(beta+1)) (H/A) ln(S A H / (p eps))`
/// with `beta = alpha / (2 (1 - alpha))`.
///
/// The log term must be positive, otherwise the bound is vacuous and
/// rejected; a result that overflows `f64` is rejected too.
pub fn sample_bound(p: &SampleBoundParams) -> Result<f64> {
    p.validate()?;
    let (h, s, a) = (p.horizon as f64, p.n_states as f64, p.n_actions as f64);
    let log_term = (s * a * h / (p.failure_prob * p.epsilon)).ln();
    if log_term <= 0.0 {
        return Err(Error::InvalidParams("S A H / (p eps) must exceed 1".into()));
    }
    let base = h * h * s * a / p.epsilon;
    let m = p.c * base.powf(2.0 * (p.beta() + 1.0)) * (h / a) * log_term;
    if !m.is_finite() {
        return Err(Error::InvalidParams("bound overflows".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn reference() -> SampleBoundParams {
        SampleBoundParams {
            horizon: 2,
            n_states: 4,
            n_actions: 2,
            epsilon: 0.1,
            failure_prob: 0.1,
            renyi_alpha: 0.5,
            c: 1.0,
        }
    }

    #[test]
    fn examples() {
        let p = reference();
        assert_eq!(p.beta(), 0.5);
        let oracle = 320f64.powi(3) * 1600f64.ln();
        let m = sample_bound(&p).unwrap();
        assert!((m - oracle).abs() / oracle < 1e-12);
        let doubled = sample_bound(&SampleBoundParams { c: 2.0, ..p }).unwrap();
        assert!((doubled - 2.0 * m).abs() / m < 1e-12);
        for bad in [
            SampleBoundParams { horizon: 0, ..p },
            SampleBoundParams { renyi_alpha: 1.0, ..p },
            SampleBoundParams { failure_prob: 1.0, ..p },
            SampleBoundParams { epsilon: 0.0, ..p },
            SampleBoundParams { c: -1.0, ..p },
            SampleBoundParams { horizon: 1, n_states: 1, n_actions: 1, epsilon: 50.0, ..p },
        ] {
            assert!(matches!(sample_bound(&bad), Err(Error::InvalidParams(_))));
        }
    }

    fn params() -> impl Strategy<Value = SampleBoundParams> {
        (1u64..20, 1u64..50, 1u64..8, 0.01f64..1.0, 0.01f64..0.99, 0.01f64..0.9, 0.1f64..10.0).prop_map(
            |(horizon, n_states, n_actions, epsilon, failure_prob, renyi_alpha, c)| SampleBoundParams {
                horizon,
                n_states,
                n_actions,
                epsilon,
                failure_prob,
                renyi_alpha,
                c,
            },
        )
    }

    proptest! {
        #[test]
        fn monotone(p in params()) {
            let m = sample_bound(&p).unwrap();
            prop_assert!(m > 0.0);
            let h = SampleBoundParams { horizon: p.horizon + 1, ..p };
            let s = SampleBoundParams { n_states: p.n_states + 1, ..p };
            let c = SampleBoundParams { c: p.c * 1.5, ..p };
            let e = SampleBoundParams { epsilon: p.epsilon * 1.1, ..p };
            let f = SampleBoundParams { failure_prob: (p.failure_prob * 1.1).min(0.999), ..p };
            prop_assert!(sample_bound(&h).unwrap() >= m);
            prop_assert!(sample_bound(&s).unwrap() >= m);
            prop_assert!(sample_bound(&c).unwrap() >= m);
            prop_assert!(sample_bound(&e).unwrap() <= m);
            prop_assert!(sample_bound(&f).unwrap() <= m);
        }
    }
}
