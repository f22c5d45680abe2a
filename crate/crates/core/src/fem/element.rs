//! Two-node Hermite cubic beam element: DOFs `[w_i, θ_i, w_j, θ_j]`.

/// Shape functions at local coordinate `s ∈ [0, 1]` for an element of length `h`.
pub(crate) fn shape(s: f64, h: f64) -> [f64; 4] {
    let s2 = s * s;
    let s3 = s2 * s;
    [
        1.0 - 3.0 * s2 + 2.0 * s3,
        h * (s - 2.0 * s2 + s3),
        3.0 * s2 - 2.0 * s3,
        h * (-s2 + s3),
    ]
}

/// First derivatives with respect to x.
pub(crate) fn shape_dx(s: f64, h: f64) -> [f64; 4] {
    let s2 = s * s;
    [
        (-6.0 * s + 6.0 * s2) / h,
        1.0 - 4.0 * s + 3.0 * s2,
        (6.0 * s - 6.0 * s2) / h,
        -2.0 * s + 3.0 * s2,
    ]
}

/// Bending stiffness `EI/h³ [...]`.
pub(crate) fn bending_stiffness(ei: f64, h: f64) -> [[f64; 4]; 4] {
    let c = ei / (h * h * h);
    let h2 = h * h;
    [
        [12.0 * c, 6.0 * h * c, -12.0 * c, 6.0 * h * c],
        [6.0 * h * c, 4.0 * h2 * c, -6.0 * h * c, 2.0 * h2 * c],
        [-12.0 * c, -6.0 * h * c, 12.0 * c, -6.0 * h * c],
        [6.0 * h * c, 2.0 * h2 * c, -6.0 * h * c, 4.0 * h2 * c],
    ]
}

/// Consistent geometric stiffness for axial force `p` (tension positive).
pub(crate) fn geometric_stiffness(p: f64, h: f64) -> [[f64; 4]; 4] {
    let c = p / (30.0 * h);
    let h2 = h * h;
    [
        [36.0 * c, 3.0 * h * c, -36.0 * c, 3.0 * h * c],
        [3.0 * h * c, 4.0 * h2 * c, -3.0 * h * c, -h2 * c],
        [-36.0 * c, -3.0 * h * c, 36.0 * c, -3.0 * h * c],
        [3.0 * h * c, -h2 * c, -3.0 * h * c, 4.0 * h2 * c],
    ]
}

/// 4-point Gauss–Legendre rule on `[0, 1]`: `(s, weight)`.
pub(crate) const GAUSS4: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity_and_end_values() {
        let h = 2.5;
        for s in [0.0, 0.3, 0.77, 1.0] {
            let n = shape(s, h);
            assert!((n[0] + n[2] - 1.0).abs() < 1e-15);
        }
        assert_eq!(shape(0.0, h), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(shape(1.0, h), [0.0, 0.0, 1.0, 0.0]);
        let d0 = shape_dx(0.0, h);
        assert_eq!(d0[1], 1.0);
        let d1 = shape_dx(1.0, h);
        assert_eq!(d1[3], 1.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 0.7;
        let s = 0.41;
        let e = 1e-6;
        let fd: Vec<f64> = shape(s + e, h)
            .iter()
            .zip(shape(s - e, h))
            .map(|(a, b)| (a - b) / (2.0 * e * h))
            .collect();
        for (a, b) in shape_dx(s, h).iter().zip(fd) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn rigid_body_modes_have_no_bending_energy() {
        let k = bending_stiffness(3.0, 0.5);
        // translation [1,0,1,0] and rotation about node i [0,1,h,1]
        for mode in [[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.5, 1.0]] {
            for row in &k {
                let f: f64 = row.iter().zip(mode).map(|(a, b)| a * b).sum();
                assert!(f.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gauss_rule_integrates_septic_exactly() {
        let integral: f64 = GAUSS4.iter().map(|(s, w)| w * s.powi(7)).sum();
        assert!((integral - 1.0 / 8.0).abs() < 1e-15);
    }
}
