//! Metric and timing report types.

/// Accuracy and beyond-accuracy metrics for one evaluation run.
///
/// `mrr` and `hr` are parallel to `cutoffs`; coverage and popularity are
/// computed at the largest cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub cutoffs: Vec<usize>,
    pub mrr: Vec<f64>,
    pub hr: Vec<f64>,
    pub cov: f64,
    pub pop: f64,
    pub event_count: usize,
}

impl MetricReport {
    pub fn mrr_at(&self, cutoff: usize) -> Option<f64> {
        self.cutoffs
            .iter()
            .position(|&k| k == cutoff)
            .map(|idx| self.mrr[idx])
    }

    pub fn hr_at(&self, cutoff: usize) -> Option<f64> {
        self.cutoffs
            .iter()
            .position(|&k| k == cutoff)
            .map(|idx| self.hr[idx])
    }
}

/// Wall-clock figures: training in minutes, scoring in milliseconds per
/// recommendation list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingReport {
    pub train_time_min: f64,
    pub mean_predict_ms: f64,
}
