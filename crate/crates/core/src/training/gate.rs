use crate::training::ErrorPair;

/// Errors remembered from the previous CEN iteration. Empty before the first
/// iteration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GateState {
    previous: Option<(f64, f64)>,
}

impl GateState {
    pub fn cold() -> Self {
        Self::default()
    }

    pub fn after(errors: &ErrorPair) -> Self {
        Self {
            previous: Some((errors.gen_error(), errors.disc_error())),
        }
    }

    pub fn prev_gen_error(&self) -> Option<f64> {
        self.previous.map(|(g, _)| g)
    }

    pub fn prev_disc_error(&self) -> Option<f64> {
        self.previous.map(|(_, d)| d)
    }

    pub fn is_cold(&self) -> bool {
        self.previous.is_none()
    }
}

/// Which modules to train: the generator when its error dropped, the
/// discriminator when its error rose. Both comparisons are strict; a module
/// whose error held steady is left alone. With no history both are trained.
pub fn cen_gate(current: &ErrorPair, state: &GateState) -> (bool, bool) {
    match state.previous {
        None => (true, true),
        Some((prev_g, prev_d)) => (current.gen_error() < prev_g, current.disc_error() > prev_d),
    }
}

impl GateState {
    /// State as if the previous iteration had produced these errors.
    pub fn with_previous(gen_error: f64, disc_error: f64) -> Self {
        Self {
            previous: Some((gen_error, disc_error)),
        }
    }
}
