//! Parameters of Heun's equation
//! `y'' + (gamma/z + delta/(z-1) + epsilon/(z-t)) y' + (alpha' beta' z - p)/(z(z-1)(z-t)) y = 0`
//! reached from the limit equations by a Moebius change of variable and a
//! gauge factor. The accessory parameter `p` is known only up to an
//! additive constant and is not reported.

use serde::{Deserialize, Serialize};

use super::{FuchsianODE, LimitFamily};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunForm {
    /// Position of the fourth singular point.
    pub t: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub alpha_p: f64,
    pub beta_p: f64,
    pub accessory_offset_known: bool,
}

impl HeunForm {
    /// `gamma + delta + epsilon - (alpha' + beta' + 1)`.
    pub fn fuchs_defect(&self) -> f64 {
        self.gamma + self.delta + self.epsilon - (self.alpha_p + self.beta_p + 1.0)
    }
}

fn ratio(num: f64, den: f64) -> Result<f64> {
    let r = num / den;
    if den == 0.0 || num == 0.0 || !r.is_finite() {
        return Err(Error::CoincidentSingularities(format!(
            "cross-ratio {num}/{den} is degenerate"
        )));
    }
    Ok(r)
}

pub fn to_heun_form(ode: &FuchsianODE) -> Result<HeunForm> {
    let t = &ode.t;
    let lt = ode.l_tilde;
    let local = |i: usize| 1.0 + ode.h[i] - ode.l[i];
    let form = match ode.family {
        LimitFamily::FromA3 => HeunForm {
            t: ratio(t[1] * (t[0] - t[2]), t[2] * (t[0] - t[1]))?,
            gamma: local(0),
            delta: local(1),
            epsilon: local(2),
            alpha_p: lt - ode.beta / 2.0,
            beta_p: lt + ode.beta / 2.0,
            accessory_offset_known: false,
        },
        LimitFamily::FromA2 => HeunForm {
            t: ratio((t[3] - t[1]) * (t[2] - t[0]), (t[3] - t[0]) * (t[2] - t[1]))?,
            gamma: local(1),
            delta: local(2),
            epsilon: local(3),
            alpha_p: lt - 0.5,
            beta_p: lt - 0.5 + ode.l[0] - ode.h[0],
            accessory_offset_known: false,
        },
    };
    Ok(form)
}
