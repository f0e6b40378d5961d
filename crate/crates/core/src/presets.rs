//! Published duty-cycle vectors for a 30-element array.

/// Symmetric 30-element taper optimized for low side-lobe level with ideal
/// stair-step switching (≈ −17 dB SLL target).
pub fn sidelobe_optimized_30() -> Vec<f64> {
    let mut xi = vec![1.0; 30];
    for (n, v) in [
        (1, 0.136),
        (2, 0.050),
        (3, 0.953),
        (4, 0.947),
        (5, 0.689),
        (9, 0.926),
    ] {
        xi[n] = v;
        xi[29 - n] = v;
    }
    xi
}

/// 30-element taper optimized with trapezoidal (finite rise/fall)
/// switching; not symmetric.
pub fn nonideal_optimized_30() -> Vec<f64> {
    let mut xi = vec![1.0; 30];
    for (n, v) in [
        (2, 0.063),
        (4, 0.078),
        (5, 0.076),
        (6, 0.063),
        (7, 0.880),
        (14, 0.962),
        (18, 0.175),
        (19, 0.471),
        (20, 0.977),
    ] {
        xi[n] = v;
    }
    xi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_duty_vectors() {
        for xi in [sidelobe_optimized_30(), nonideal_optimized_30()] {
            assert_eq!(xi.len(), 30);
            assert!(xi.iter().all(|&x| x > 0.0 && x <= 1.0));
        }
    }

    #[test]
    fn ideal_preset_is_symmetric() {
        let xi = sidelobe_optimized_30();
        for n in 0..15 {
            assert_eq!(xi[n], xi[29 - n]);
        }
        assert_eq!(xi[1], 0.136);
        assert_eq!(xi[9], 0.926);
        assert_eq!(xi[0], 1.0);
    }
}
