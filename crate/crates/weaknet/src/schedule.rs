//! The parameter schedule: every constant, exponent, and budget the pipeline
//! consumes, plus the per-instance resolver that turns (ε, σ, n) into concrete
//! stage parameters.
//!
//! Stage counts follow power laws in 1/ε (h = ⌈(1/ε)^h_exp⌉ and so on), with
//! floors where the geometry needs a minimum (the line-family construction
//! needs at least 2(d-1) parts). Derived quantities (z, δ, l, g, dyadic class
//! data, stage thresholds) are recomputed from the primaries on every call;
//! nothing is cached across instances.
//!
//! Constants named `c_*` are the calibrated stand-ins for the "sufficiently
//! small/large constant" slots; correctness is enforced by post-hoc oracle
//! verification with a double-and-rebuild loop, not by the constants
//! themselves.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum ScheduleError {
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("invalid schedule: {0}")]
    Invalid(String),
}

/// Full parameter schedule. Field names match the CLI flags 1:1 (dashes for
/// underscores) and the key=value schedule file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Schedule {
    /// Recursion floor: ε at or above this takes the verified base branch.
    pub eps0: f64,
    /// Slack exponents reported in the size ledger envelopes.
    pub gamma_prime: f64,
    pub gamma0: f64,

    /// Stage-count exponents: count = ⌈(1/ε)^exp⌉, ordered h ≤ r ≤ s ≤ u < t.
    pub h_exp: f64,
    pub r_exp: f64,
    pub s_exp: f64,
    pub u_exp: f64,
    /// Exponent for t; non-finite or 0 means the per-dimension default
    /// d(2d-1)^2 / (6d^2-6d+2).
    pub t_exp: f64,

    /// Selection exponents β_d and β_{d-1} (calibrated defaults, not the
    /// conservative tower).
    pub beta_d: f64,
    pub beta_dm1: f64,

    /// Constant table.
    pub c_nar: f64,
    /// Spread-case acceptance: a line must pierce at least
    /// c_pierce·σ^{β_{d-1}}·C(|P_K|, d) listed simplices while surrounded.
    pub c_pierce: f64,
    pub c_tr: f64,
    pub c_tr_prime: f64,
    /// 0 means the per-dimension default 1/(4d+4).
    pub c_surr: f64,
    /// 0 means the per-dimension default 1/(10·c_cross(d)).
    pub c_full: f64,
    pub c_rich: f64,
    pub c_sparse: f64,
    pub c_loose: f64,
    pub c_vcon: f64,
    pub c_good: f64,
    /// C: narrow-recursion threshold multiplier (ε̃ = C·ε′·r^{1/(d-1)}).
    pub c_narrow_step: f64,
    /// C′: sparse-net stride constant.
    pub c_sparse_stride: f64,
    /// C̃: per-light-cell recursion constant.
    pub c_tilde: f64,
    /// D′: set-aside recursion constant.
    pub d_prime: f64,
    /// C of the cutting crossing bound (d+1)·C·(m/r)·ln r.
    pub cutting_c: f64,
    /// C_0 of the heavy-cell crossing budget I = C_0 (m z / r) log r.
    pub c_zero: f64,
    /// Lemma thresholds: sample-convexity constant and cover-marking constant.
    pub c_samp: f64,
    pub c_mark: f64,
    /// Crossing-number constants per dimension (measure-and-retry targets).
    pub c_cross_d2: f64,
    pub c_cross_d3: f64,
    /// Strong-net sample-size constant A: size = ⌈(A/ε)·ln(A/ε)⌉.
    pub a_strong: f64,
    /// Base-branch grid resolution constant: ⌈c_grid/ε⌉ cells per axis.
    pub c_grid: f64,

    /// Retry budgets.
    pub perturb_retries: u32,
    pub cutting_attempts: u32,
    pub partition_attempts: u32,
    pub strong_attempts: u32,
    pub rebuild_attempts: u32,
    pub depth_cap: u32,

    /// Oracle budgets.
    pub adversarial_starts: u32,
    pub adversarial_moves: u64,
    pub exhaustive_budget: u64,
    pub second_selection_budget: u64,

    /// Π_rich: exact counting cap and sampling size above it.
    pub pi_rich_exact_cap: u64,
    pub pi_rich_samples: u64,

    /// Worker parallelism (1 = sequential; results identical at any value).
    pub jobs: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            eps0: 0.05,
            gamma_prime: 0.1,
            gamma0: 0.05,
            h_exp: 0.2,
            r_exp: 0.3,
            s_exp: 0.4,
            u_exp: 0.5,
            t_exp: 0.0,
            beta_d: 2.0,
            beta_dm1: 2.0,
            c_nar: 0.5,
            c_pierce: 0.1,
            c_tr: 0.25,
            c_tr_prime: 0.5,
            c_surr: 0.0,
            c_full: 0.0,
            c_rich: 0.5,
            c_sparse: 1.0,
            c_loose: 1.0,
            c_vcon: 1000.0,
            c_good: 1.0,
            c_narrow_step: 1.0,
            c_sparse_stride: 0.5,
            c_tilde: 1.0,
            d_prime: 1.0,
            cutting_c: 4.0,
            c_zero: 1.0,
            c_samp: 100.0,
            c_mark: 4.0,
            c_cross_d2: 4.0,
            c_cross_d3: 6.0,
            a_strong: 8.0,
            c_grid: 1.0,
            perturb_retries: 32,
            cutting_attempts: 16,
            partition_attempts: 16,
            strong_attempts: 16,
            rebuild_attempts: 8,
            depth_cap: 12,
            adversarial_starts: 64,
            adversarial_moves: 100_000,
            exhaustive_budget: 10_000_000,
            second_selection_budget: 1_000_000,
            pi_rich_exact_cap: 500,
            pi_rich_samples: 20_000,
            jobs: 1,
        }
    }
}

/// Concrete stage parameters resolved for one (ε, σ, n, d) instance.
#[derive(Clone, Debug, PartialEq)]
pub struct StageParams {
    pub d: usize,
    pub eps: f64,
    pub sigma: f64,
    pub n: usize,
    /// Primary counts, floored so that h ≤ r ≤ s ≤ u < t always holds.
    pub h: u64,
    pub r: u64,
    pub s: u64,
    pub t: u64,
    pub u: u64,
    /// Cutting resolution z = ⌈r^{d-1/2}⌉.
    pub z: u64,
    /// Vertical-convexity defect δ = c_vcon / r^{d(d+1)+1}, clamped to 1/2.
    pub delta: f64,
    /// Dyadic class count l = min(⌈log2(1/ε)⌉, ⌈log2(r^d/z)⌉+1), at least 1.
    pub l: u32,
    /// True when the ε term of l was the binding one.
    pub l_eps_bound: bool,
    /// Good-cell multiplier g = ⌈c_good·l²⌉ and ϑ = g/σ^{β_{d-1}}.
    pub g: u64,
    pub theta: f64,
    /// σ^{β_{d-1}}, the factor most stage thresholds share.
    pub sigma_pow: f64,
}

impl Schedule {
    /// Per-dimension default exponent for t: d(2d-1)^2 / (6d^2 - 6d + 2).
    pub fn t_exponent(&self, d: usize) -> f64 {
        if self.t_exp.is_finite() && self.t_exp > 0.0 {
            return self.t_exp;
        }
        let df = d as f64;
        df * (2.0 * df - 1.0) * (2.0 * df - 1.0) / (6.0 * df * df - 6.0 * df + 2.0)
    }

    /// C_surr default 1/(4d+4).
    pub fn c_surr_value(&self, d: usize) -> f64 {
        if self.c_surr > 0.0 {
            self.c_surr
        } else {
            1.0 / (4.0 * d as f64 + 4.0)
        }
    }

    /// Crossing-number target constant per dimension.
    pub fn c_cross(&self, d: usize) -> f64 {
        match d {
            2 => self.c_cross_d2,
            _ => self.c_cross_d3 * (d as f64 - 2.0).max(1.0),
        }
    }

    /// C_full default 1/(10·c_cross(d)).
    pub fn c_full_value(&self, d: usize) -> f64 {
        if self.c_full > 0.0 {
            self.c_full
        } else {
            1.0 / (10.0 * self.c_cross(d))
        }
    }

    /// η_d = (⌊d/2⌋ - 1)/2 (zone-complexity polylog exponent).
    pub fn eta(&self, d: usize) -> f64 {
        ((d / 2) as f64 - 1.0) / 2.0
    }

    /// Resolves the stage parameters for one instance. Counts grow as
    /// (1/ε)^exp with floors: r and s at least 2(d-1) so the line family is
    /// nonempty, everything at least 1, and the chain h ≤ r ≤ s ≤ u < t
    /// enforced by successive max/min.
    pub fn resolve(&self, d: usize, eps: f64, sigma: f64, n: usize) -> StageParams {
        assert!(d >= 2, "dimension must be at least 2");
        assert!(eps > 0.0 && eps <= 1.0, "eps in (0,1]");
        assert!(sigma > 0.0 && sigma <= 1.0, "sigma in (0,1]");
        let inv = 1.0 / eps;
        let count = |exp: f64| -> u64 { inv.powf(exp).ceil().max(1.0) as u64 };
        let floor_line = 2 * (d as u64 - 1);
        let h = count(self.h_exp);
        let r = count(self.r_exp).max(h).max(floor_line);
        let s = count(self.s_exp).max(r);
        let u = count(self.u_exp).max(s);
        let t = count(self.t_exponent(d)).max(u + 1);
        let z = (r as f64).powf(d as f64 - 0.5).ceil() as u64;
        let delta = (self.c_vcon / (r as f64).powi((d * (d + 1) + 1) as i32)).min(0.5);
        let l_eps = (inv.log2().ceil() as i64).max(1) as u32;
        let l_r = ((r as f64).powi(d as i32) / z as f64).log2().ceil() as i64 + 1;
        let l_r = l_r.max(1) as u32;
        let (l, l_eps_bound) = if l_eps <= l_r { (l_eps, true) } else { (l_r, false) };
        let g = (self.c_good * (l as f64) * (l as f64)).ceil().max(1.0) as u64;
        let sigma_pow = sigma.powf(self.beta_dm1);
        let theta = g as f64 / sigma_pow;
        StageParams {
            d,
            eps,
            sigma,
            n,
            h,
            r,
            s,
            t,
            u,
            z,
            delta,
            l,
            l_eps_bound,
            g,
            theta,
            sigma_pow,
        }
    }

    /// Serializes as flat key=value lines (the schedule file format).
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("schedule serializes");
        let map = value.as_object().expect("schedule is a flat struct");
        let mut out = String::new();
        for (k, v) in map {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    /// Parses the key=value format; unknown keys are errors, missing keys keep
    /// their defaults.
    pub fn from_text(text: &str) -> Result<Schedule, ScheduleError> {
        let defaults = serde_json::to_value(Schedule::default()).expect("schedule serializes");
        let mut map: BTreeMap<String, serde_json::Value> = serde_json::from_value(defaults)
            .expect("schedule is a flat struct");
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ScheduleError::Parse {
                line: i + 1,
                detail: format!("expected key=value, got {line:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !map.contains_key(key) {
                return Err(ScheduleError::Parse {
                    line: i + 1,
                    detail: format!("unknown schedule key {key:?}"),
                });
            }
            let parsed: serde_json::Value =
                serde_json::from_str(value).map_err(|e| ScheduleError::Parse {
                    line: i + 1,
                    detail: format!("bad value for {key}: {e}"),
                })?;
            map.insert(key.to_string(), parsed);
        }
        let schedule: Schedule = serde_json::from_value(serde_json::Value::Object(
            map.into_iter().collect(),
        ))
        .map_err(|e| ScheduleError::Invalid(e.to_string()))?;
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        if !(self.eps0 > 0.0 && self.eps0 <= 1.0) {
            return Err(ScheduleError::Invalid("eps0 must be in (0,1]".into()));
        }
        if self.h_exp > self.r_exp || self.r_exp > self.s_exp || self.s_exp > self.u_exp {
            return Err(ScheduleError::Invalid(
                "exponents must satisfy h_exp <= r_exp <= s_exp <= u_exp".into(),
            ));
        }
        for (name, v) in [
            ("c_vcon", self.c_vcon),
            ("c_pierce", self.c_pierce),
            ("cutting_c", self.cutting_c),
            ("a_strong", self.a_strong),
            ("c_grid", self.c_grid),
        ] {
            if v <= 0.0 {
                return Err(ScheduleError::Invalid(format!("{name} must be positive")));
            }
        }
        if self.jobs == 0 {
            return Err(ScheduleError::Invalid("jobs must be at least 1".into()));
        }
        Ok(())
    }
}
