use proptest::prelude::*;
use reinhardt_core::sl2::{
    cayley_conjugate, cayley_inverse, exp_traceless, GroupMatrix, Su11Matrix, TracelessMatrix,
};
use reinhardt_core::Complex;

fn tm() -> impl Strategy<Value = TracelessMatrix> {
    prop::array::uniform3(-2.0..2.0f64).prop_map(TracelessMatrix::from_vec3)
}

fn close(a: &TracelessMatrix, b: &TracelessMatrix, tol: f64) -> bool {
    (*a - *b).max_abs() <= tol
}

fn mat3_mul(p: &[[f64; 3]; 3], q: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| p[i][k] * q[k][j]).sum();
        }
    }
    out
}

#[test]
fn trace_form_examples() {
    let j = TracelessMatrix::J;
    assert_eq!(j.trace_form(&j), -2.0);
    let x = TracelessMatrix::new(0.3, -1.2, 0.7);
    assert!((x.trace_form(&x) + 2.0 * x.det()).abs() < 1e-15);
}

#[test]
fn commutator_of_j_and_h() {
    let j = TracelessMatrix::J;
    assert_eq!(j.commutator(&j), TracelessMatrix::ZERO);
    // J H - H J with J = [[0,-1],[1,0]], H = diag(1,-1) is 2 [[0,1],[1,0]].
    assert_eq!(
        j.commutator(&TracelessMatrix::H),
        TracelessMatrix::new(0.0, 2.0, 2.0)
    );
}

#[test]
fn exp_examples() {
    let t = 0.7;
    let g = exp_traceless(&TracelessMatrix::J, t);
    assert!(g.sub(&GroupMatrix::rotation(t)).max_abs() < 1e-15);
    let d = exp_traceless(&TracelessMatrix::H, t);
    assert!(
        d.sub(&GroupMatrix::new(t.exp(), 0.0, 0.0, (-t).exp()))
            .max_abs()
            < 1e-14
    );
    let n = exp_traceless(&TracelessMatrix::new(0.0, 1.0, 0.0), t);
    assert_eq!(n, GroupMatrix::new(1.0, t, 0.0, 1.0));
    let r = exp_traceless(&TracelessMatrix::J, std::f64::consts::PI / 3.0);
    assert!(r.sub(&GroupMatrix::r()).max_abs() < 1e-15);
}

#[test]
fn exp_near_nilpotent_is_smooth() {
    // Tiny determinant on either side of zero must agree with the series branch.
    let base = TracelessMatrix::new(0.0, 1.0, 0.0);
    for eps in [1e-14, -1e-14, 1e-10, -1e-10] {
        let x = base + TracelessMatrix::new(0.0, 0.0, eps);
        let g = exp_traceless(&x, 1.3);
        let g0 = exp_traceless(&base, 1.3);
        assert!(g.sub(&g0).max_abs() < 1e-9);
        assert!((g.det() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cayley_of_j_is_diagonal() {
    let s = cayley_conjugate(&TracelessMatrix::J);
    assert_eq!(s, Su11Matrix::new(1.0, Complex::ZERO));
    let e = s.entries();
    assert_eq!(e[0][0], Complex::new(0.0, -1.0));
    assert_eq!(e[1][1], Complex::new(0.0, 1.0));
}

#[test]
fn cayley_matches_explicit_conjugation() {
    // C = (1/sqrt2) [[1, i], [i, 1]], C^-1 = (1/sqrt2) [[1, -i], [-i, 1]].
    let a = TracelessMatrix::new(0.4, -0.9, 1.7);
    let m = a.to_array();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = [
        [Complex::new(s, 0.0), Complex::new(0.0, s)],
        [Complex::new(0.0, s), Complex::new(s, 0.0)],
    ];
    let ci = [
        [Complex::new(s, 0.0), Complex::new(0.0, -s)],
        [Complex::new(0.0, -s), Complex::new(s, 0.0)],
    ];
    let mc: [[Complex; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| Complex::new(m[i][j], 0.0)));
    let mul = |p: [[Complex; 2]; 2], q: [[Complex; 2]; 2]| -> [[Complex; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| p[i][0] * q[0][j] + p[i][1] * q[1][j]))
    };
    let conj = mul(mul(ci, mc), c);
    let e = cayley_conjugate(&a).entries();
    for i in 0..2 {
        for j in 0..2 {
            assert!((conj[i][j] - e[i][j]).abs() < 1e-15);
        }
    }
}

#[test]
fn bracket_inner_product_sign() {
    // <[H,e],[H,f]> = <2e,-2f> = -4 while <H,H><e,f> = 2, and <e,H> = 0.
    let h = TracelessMatrix::H;
    let e = TracelessMatrix::new(0.0, 1.0, 0.0);
    let f = TracelessMatrix::new(0.0, 0.0, 1.0);
    assert_eq!(e.trace_form(&h), 0.0);
    assert_eq!(h.commutator(&e).trace_form(&h.commutator(&f)), -4.0);
    assert_eq!(h.trace_form(&h) * e.trace_form(&f), 2.0);
}

proptest! {
    #[test]
    fn trace_form_is_symmetric_and_invariant(a in tm(), b in tm()) {
        prop_assert!((a.trace_form(&b) - b.trace_form(&a)).abs() < 1e-12);
        prop_assert!(a.trace_form(&a.commutator(&b)).abs() < 1e-12);
    }

    #[test]
    fn commutator_matches_matrix_product(a in tm(), b in tm()) {
        let ab = a.mul_matrix(&b);
        let ba = b.mul_matrix(&a);
        let c = a.commutator(&b).to_array();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((ab[i][j] - ba[i][j] - c[i][j]).abs() < 1e-12);
            }
        }
        prop_assert!(close(&a.commutator(&b), &-b.commutator(&a), 1e-15));
    }

    #[test]
    fn double_bracket(a in tm(), b in tm()) {
        // [[B,A],A] = -2 det(A) B - 2 A B A
        let lhs = b.commutator(&a).commutator(&a).to_array();
        let aba = reinhardt_core::sl2::mat_mul(&a.mul_matrix(&b), &a.to_array());
        let bm = b.to_array();
        for i in 0..2 {
            for j in 0..2 {
                let rhs = -2.0 * a.det() * bm[i][j] - 2.0 * aba[i][j];
                prop_assert!((lhs[i][j] - rhs).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn jacobi(a in tm(), b in tm(), c in tm()) {
        let s = a.commutator(&b).commutator(&c) + b.commutator(&c).commutator(&a) + c.commutator(&a).commutator(&b);
        prop_assert!(s.max_abs() < 1e-12);
    }

    #[test]
    fn anticommutator_is_scalar(a in tm(), b in tm()) {
        let ab = a.mul_matrix(&b);
        let ba = b.mul_matrix(&a);
        let t = a.trace_form(&b);
        prop_assert!((ab[0][0] + ba[0][0] - t).abs() < 1e-12);
        prop_assert!((ab[1][1] + ba[1][1] - t).abs() < 1e-12);
        prop_assert!((ab[0][1] + ba[0][1]).abs() < 1e-12);
        prop_assert!((ab[1][0] + ba[1][0]).abs() < 1e-12);
    }

    #[test]
    fn form_is_ad_invariant(a in tm(), b in tm(), c in tm()) {
        prop_assert!((a.trace_form(&b.commutator(&c)) - a.commutator(&b).trace_form(&c)).abs() < 1e-12);
    }

    #[test]
    fn trace_quotient(a in tm(), b in tm(), c in tm(), d in tm()) {
        let lhs = a.trace_form(&c) * b.trace_form(&d) - b.trace_form(&c) * a.trace_form(&d);
        let rhs = -0.5 * a.commutator(&b).trace_form(&c.commutator(&d));
        prop_assert!((lhs - rhs).abs() < 1e-11);
    }

    #[test]
    fn bracket_inner_product_on_orthogonal_pairs(a in tm(), b in tm(), c in tm(), d in tm()) {
        let cc = c.trace_form(&c);
        prop_assume!(cc.abs() > 1e-3);
        let b = b - c.scale(b.trace_form(&c) / cc);
        let lhs = a.commutator(&b).trace_form(&c.commutator(&d));
        let rhs = -2.0 * a.trace_form(&c) * b.trace_form(&d);
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn so21_preserves_brackets(a in tm(), b in tm()) {
        let pa = a.so21();
        let pb = b.so21();
        let ab = mat3_mul(&pa, &pb);
        let ba = mat3_mul(&pb, &pa);
        let pc = a.commutator(&b).so21();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((ab[i][j] - ba[i][j] - pc[i][j]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn exp_is_a_one_parameter_group(a in tm(), s in -1.5..1.5f64, t in -1.5..1.5f64) {
        let lhs = exp_traceless(&a, s + t);
        let rhs = exp_traceless(&a, s).mul(&exp_traceless(&a, t));
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-10 * (1.0 + lhs.max_abs()));
        prop_assert!((exp_traceless(&a, t).det() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cayley_round_trip_and_structure(a in tm(), b in tm()) {
        let sa = cayley_conjugate(&a);
        let sb = cayley_conjugate(&b);
        prop_assert!(close(&cayley_inverse(&sa), &a, 1e-15));
        prop_assert!((sa.trace_form(&sb) - a.trace_form(&b)).abs() < 1e-12);
        prop_assert!((sa.det() - a.det()).abs() < 1e-12);
        let c = cayley_conjugate(&a.commutator(&b));
        let d = sa.commutator(&sb);
        prop_assert!((c.delta - d.delta).abs() < 1e-12 && (c.p - d.p).abs() < 1e-12);
    }

    #[test]
    fn group_inverse_and_adjoint(a in tm(), t in -1.0..1.0f64, b in tm()) {
        let g = exp_traceless(&a, t);
        prop_assert!(g.mul(&g.inverse()).sub(&GroupMatrix::IDENTITY).max_abs() < 1e-12);
        prop_assert!(close(&g.adjoint_inv(&g.adjoint(&b)), &b, 1e-11));
        prop_assert!((g.adjoint(&b).det() - b.det()).abs() < 1e-10);
    }
}
