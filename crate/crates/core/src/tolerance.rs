/// Numerical knobs shared by the approximate backends.
///
/// Exact backends (rationals, exact quaternions) ignore `abs_tol` and
/// compare exactly. The probe window bounds every finite equality check
/// on the weighted-shift backend; the guard band pads dense truncations
/// so interior matrix elements stay clean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub probe_levels: u32,
    pub guard_band: u32,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            abs_tol: 1e-9,
            probe_levels: 16,
            guard_band: 4,
        }
    }
}

impl ToleranceConfig {
    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_probe_levels(mut self, probe_levels: u32) -> Self {
        self.probe_levels = probe_levels;
        self
    }

    pub fn with_guard_band(mut self, guard_band: u32) -> Self {
        self.guard_band = guard_band;
        self
    }

    /// Last Fock level included in windowed equality checks.
    pub fn window_top(&self) -> i64 {
        self.probe_levels as i64 + self.guard_band as i64
    }
}
