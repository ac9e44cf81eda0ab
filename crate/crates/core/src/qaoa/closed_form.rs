//! Closed-form single-round expectations for LocalMaxCut on graphs of girth
//! at least 7 (any cycle `C_n`, `n >= 7`, for degree 2).
//!
//! Abbreviations: `s2b = sin 2β`, `c2b = cos 2β`, `sg = sin γ`, `cg = cos γ`,
//! `sh = sin(γ/2)`, `ch = cos(γ/2)`.

use super::QaoaAngles;

struct Trig {
    s2b: f64,
    c2b: f64,
    sg: f64,
    cg: f64,
    sh: f64,
    ch: f64,
}

impl Trig {
    fn new(a: QaoaAngles) -> Self {
        let (s2b, c2b) = (2.0 * a.beta).sin_cos();
        let (sg, cg) = a.gamma.sin_cos();
        let (sh, ch) = (a.gamma / 2.0).sin_cos();
        Trig {
            s2b,
            c2b,
            sg,
            cg,
            sh,
            ch,
        }
    }
}

/// `⟨Z_uv⟩` for an edge of a degree-2 graph.
pub fn zk_edge_d2(a: QaoaAngles) -> f64 {
    let t = Trig::new(a);
    -2.0 * t.c2b * t.s2b * t.cg * t.sg * t.ch.powi(2)
        + 2.0 * t.s2b.powi(2) * t.cg * t.sg * t.ch.powi(3) * t.sh
}

/// `⟨Z_{w1 w2}⟩` for the two neighbors of a vertex `w` in a degree-2 graph.
///
/// The second term carries `cos²(γ/2)`: the family `{{w1,w}, {w,w2}}`
/// leaves the two outer distance-2 pair terms unused, each contributing
/// `cos(γ/2)`.
pub fn zk_pair_d2(a: QaoaAngles) -> f64 {
    let t = Trig::new(a);
    -2.0 * t.c2b * t.s2b * t.cg.powi(2) * t.ch * t.sh
        + t.s2b.powi(2) * t.cg.powi(2) * t.sg.powi(2) * t.ch.powi(2)
}

/// `F(γ,β)` for LocalMaxCut on a degree-2 graph with `n` vertices.
pub fn closed_form_f2(n: f64, a: QaoaAngles) -> f64 {
    let g = a.gamma;
    let b = a.beta;
    let sn = f64::sin;
    let cs = f64::cos;
    3.0 * n / 4.0
        + n / 32.0 * sn(4.0 * b) * (3.0 * sn(g) + 4.0 * sn(2.0 * g) + 3.0 * sn(3.0 * g))
        - n / 16.0
            * sn(2.0 * b).powi(2)
            * sn(g)
            * cs(g / 2.0).powi(2)
            * (sn(g) + 4.0 * sn(2.0 * g) + sn(3.0 * g))
}

/// `⟨Z_uv⟩` for an edge of a degree-3 graph.
pub fn zk_edge_d3(a: QaoaAngles) -> f64 {
    let t = Trig::new(a);
    -2.0 * t.c2b * t.s2b * t.sg * t.cg * t.ch.powi(4)
}

/// `⟨Z_{B(u)}⟩` for the closed neighborhood of a vertex in a degree-3 graph.
pub fn zk_ball_d3(a: QaoaAngles) -> f64 {
    let t = Trig::new(a);
    let g = a.gamma;
    let s3 = (1.5 * g).sin();
    let c3 = (1.5 * g).cos();
    let s5 = (2.5 * g).sin();
    let c5 = (2.5 * g).cos();
    let mix = 3.0 * c3 + c5;
    let l_center = 0.25 * t.s2b * t.c2b.powi(3) * t.ch.powi(3) * (3.0 * s3 - s5);
    let l_leaf = 0.75 * t.s2b * t.c2b.powi(3) * t.sh * t.ch.powi(2) * mix;
    let l_center_two_leaves = -3.0 * t.s2b.powi(3) * t.c2b * t.sh * t.cg.powi(5) * t.ch.powi(5);
    let l_three_leaves = -t.s2b.powi(3)
        * t.c2b
        * t.ch.powi(6)
        * (t.sh * mix.powi(3) / 64.0 + t.sg.powi(3) * t.cg.powi(3) * t.ch.powi(4));
    l_center + l_leaf + l_center_two_leaves + l_three_leaves
}

/// `F(γ,β)` for LocalMaxCut on a degree-3 graph with `n` vertices:
/// `n/2 − (3n/4)⟨Z_uv⟩ + (n/4)⟨Z_{B(u)}⟩`, expanded.
pub fn closed_form_f3(n: f64, a: QaoaAngles) -> f64 {
    let t = Trig::new(a);
    let g = a.gamma;
    let s3 = (1.5 * g).sin();
    let c3 = (1.5 * g).cos();
    let s5 = (2.5 * g).sin();
    let c5 = (2.5 * g).cos();
    let mix = 3.0 * c3 + c5;
    n / 2.0 + 1.5 * n * t.c2b * t.s2b * t.sg * t.cg * t.ch.powi(4)
        + n / 16.0 * t.s2b * t.c2b.powi(3) * t.ch.powi(3) * (3.0 * s3 - s5)
        + 3.0 * n / 16.0 * t.s2b * t.c2b.powi(3) * t.sh * t.ch.powi(2) * mix
        - 3.0 * n / 4.0 * t.s2b.powi(3) * t.c2b * t.sh * t.cg.powi(5) * t.ch.powi(5)
        - n / 4.0
            * t.s2b.powi(3)
            * t.c2b
            * t.ch.powi(6)
            * (t.sh * mix.powi(3) / 64.0 + t.sg.powi(3) * t.cg.powi(3) * t.ch.powi(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn samples(seed: u64, count: usize) -> Vec<QaoaAngles> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| QaoaAngles::new(rng.gen_range(-4.0 * PI..4.0 * PI), rng.gen_range(-PI..PI)))
            .collect()
    }

    #[test]
    fn double_angle_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        for _ in 0..1000 {
            let g: f64 = rng.gen_range(-4.0 * PI..4.0 * PI);
            let (s, c) = g.sin_cos();
            let (sh, ch) = (g / 2.0).sin_cos();
            let (s3, c3) = (1.5 * g).sin_cos();
            let (s5, c5) = (2.5 * g).sin_cos();
            assert!((c * ch + s * sh - ch).abs() < 1e-12);
            assert!((c * ch - s * sh - c3).abs() < 1e-12);
            assert!((c.powi(3) * sh + s.powi(3) * ch - 0.25 * (3.0 * s3 - s5)).abs() < 1e-12);
            assert!((c.powi(3) * ch - s.powi(3) * sh - 0.25 * (3.0 * c3 + c5)).abs() < 1e-12);
        }
    }

    #[test]
    fn f2_assembles_from_terms() {
        for a in samples(2, 200) {
            let assembled = 0.75 - 0.5 * zk_edge_d2(a) - 0.25 * zk_pair_d2(a);
            assert!((closed_form_f2(1.0, a) - assembled).abs() < 1e-12);
        }
    }

    #[test]
    fn f3_assembles_from_terms() {
        for a in samples(3, 200) {
            let assembled = 0.5 - 0.75 * zk_edge_d3(a) + 0.25 * zk_ball_d3(a);
            assert!((closed_form_f3(1.0, a) - assembled).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_zero_is_baseline() {
        for b in [0.0, 0.3, 1.7] {
            assert_eq!(closed_form_f2(1.0, QaoaAngles::new(0.0, b)), 0.75);
            assert_eq!(closed_form_f3(1.0, QaoaAngles::new(0.0, b)), 0.5);
        }
    }

    #[test]
    fn edge_d3_vanishes_at_quarter_pi() {
        for g in [0.2, 1.0, 2.9] {
            assert!(zk_edge_d3(QaoaAngles::new(g, PI / 4.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn periodicity() {
        for a in samples(4, 100) {
            for f in [closed_form_f2, closed_form_f3] {
                let base = f(1.0, a);
                let shifted_beta = f(1.0, QaoaAngles::new(a.gamma, a.beta + PI));
                let shifted_gamma = f(1.0, QaoaAngles::new(a.gamma + 4.0 * PI, a.beta));
                assert!((base - shifted_beta).abs() < 1e-12);
                assert!((base - shifted_gamma).abs() < 1e-12);
            }
        }
    }
}
