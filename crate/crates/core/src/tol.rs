use std::sync::atomic::{AtomicU64, Ordering};

/// Tolerance used by every invariant check unless a caller passes its own.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current global numerical tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Replaces the global tolerance. Non-positive or non-finite values are ignored.
pub fn set_tolerance(tol: f64) {
    if tol.is_finite() && tol > 0.0 {
        TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bits_decode_to_1e_minus_9() {
        assert_eq!(DEFAULT_TOLERANCE.to_bits(), 0x3E11_2E0B_E826_D695);
    }
}
