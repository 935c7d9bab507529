use super::ModelError;

/// A closed interval of microseconds since boot. Both bounds are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeWindow {
    start_us: u64,
    end_us: u64,
}

impl TimeWindow {
    pub fn new(start_us: u64, end_us: u64) -> Result<Self, ModelError> {
        if start_us > end_us {
            return Err(ModelError::InvalidWindow { start_us, end_us });
        }
        Ok(Self { start_us, end_us })
    }

    pub const FULL: Self = Self {
        start_us: 0,
        end_us: u64::MAX,
    };

    pub fn start_us(&self) -> u64 {
        self.start_us
    }

    pub fn end_us(&self) -> u64 {
        self.end_us
    }

    pub fn contains(&self, t: u64) -> bool {
        self.start_us <= t && t <= self.end_us
    }

    /// `None` when the windows do not overlap.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let start_us = self.start_us.max(other.start_us);
        let end_us = self.end_us.min(other.end_us);
        (start_us <= end_us).then_some(Self { start_us, end_us })
    }

    /// Index range of `sorted` whose timestamps fall inside the window.
    pub fn index_range(&self, sorted: &[u64]) -> core::ops::Range<usize> {
        let lo = sorted.partition_point(|&t| t < self.start_us);
        let hi = sorted.partition_point(|&t| t <= self.end_us);
        lo..hi.max(lo)
    }
}
