//! Property tests for the exact-arithmetic layers: word arithmetic,
//! window structure, group constructors and the spectral primitives.

use num_complex::Complex64;
use proptest::prelude::*;

use herzschur::linalg::{eigh, psd_project, ComplexMatrix};
use herzschur::window::{Ambient, Elem, GroupWindow};
use herzschur::FiniteGroup;

fn letter() -> impl Strategy<Value = i8> {
    prop_oneof![Just(1i8), Just(-1i8), Just(2i8), Just(-2i8)]
}

fn word() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(letter(), 0..12)
}

proptest! {
    #[test]
    fn free_word_arithmetic(u in word(), v in word()) {
        let f = Ambient::Free { rank: 2 };
        // building from arbitrary letters reduces; products of reduced
        // words never exceed the length sum and cancel against inverses
        let wu = f.mul(&f.identity(), &Elem::Word(u));
        let wv = f.mul(&f.identity(), &Elem::Word(v));
        let prod = f.mul(&wu, &wv);
        prop_assert!(prod.length() <= wu.length() + wv.length());
        let cancel = f.mul(&wu, &f.inv(&wu));
        prop_assert!(cancel.is_identity());
        // (uv)^{-1} = v^{-1} u^{-1}
        let lhs = f.inv(&prod);
        let rhs = f.mul(&f.inv(&wv), &f.inv(&wu));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lattice_window_difference_sets(radius in 0usize..4, dim in 1usize..3) {
        let ambient = Ambient::Lattice { dim };
        let w = GroupWindow::ball(ambient.clone(), radius).unwrap();
        let has_identity = w.diff_of(&ambient.identity()).is_some();
        prop_assert!(has_identity);
        for d in w.diff_set() {
            // closed under inversion and contained in the double ball
            let has_inverse = w.diff_of(&ambient.inv(d)).is_some();
            prop_assert!(has_inverse);
            prop_assert!(d.length() <= 2 * radius);
        }
    }

    #[test]
    fn cyclic_and_dihedral_constructors_verify(n in 1usize..16) {
        let c = FiniteGroup::cyclic(n).unwrap();
        prop_assert_eq!(c.order(), n);
        prop_assert!(c.is_abelian());
        let d = FiniteGroup::dihedral(n).unwrap();
        prop_assert_eq!(d.order(), 2 * n);
        prop_assert_eq!(d.is_abelian(), n <= 2);
    }

    #[test]
    fn psd_projection_is_idempotent(entries in prop::collection::vec(-1.0f64..1.0, 9)) {
        let m = ComplexMatrix::from_real(3, 3, &entries);
        let p = psd_project(&m);
        let eig = eigh(&p, 1e-9).unwrap();
        prop_assert!(eig.min_eigenvalue() >= -1e-12);
        let pp = psd_project(&p);
        prop_assert!(pp.sub(&p).frobenius_norm() <= 1e-12 * (1.0 + p.frobenius_norm()));
    }

    #[test]
    fn eigh_reconstructs_random_hermitian(res in prop::collection::vec(-1.0f64..1.0, 16),
                                          ims in prop::collection::vec(-1.0f64..1.0, 16)) {
        let raw = ComplexMatrix::from_fn(4, 4, |i, j| {
            Complex64::new(res[i * 4 + j], ims[i * 4 + j])
        });
        let h = raw.hermitize();
        let eig = eigh(&h, 1e-9).unwrap();
        let err = eig.reconstruct().sub(&h).frobenius_norm();
        prop_assert!(err <= 1e-12 * (1.0 + h.frobenius_norm()));
        let unit = eig
            .eigenvectors
            .adjoint()
            .matmul(&eig.eigenvectors)
            .sub(&ComplexMatrix::identity(4))
            .frobenius_norm();
        prop_assert!(unit <= 1e-12);
        for k in 1..4 {
            prop_assert!(eig.eigenvalues[k] >= eig.eigenvalues[k - 1]);
        }
    }
}
