mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stemgeo::bingeo::{close, connected_components, convex_hull, convexity_defects, make_ellipse_kernel, trace_contour};
use stemgeo::BinaryMask;
use support::{defects_oracle, hull_oracle, random_blob, random_mask};

#[test]
fn hull_and_defects_match_oracles_on_blobs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4011);
    for case in 0..60 {
        let mask = random_blob(&mut rng, 90, 110);
        let comp = connected_components(&mask, 1).into_iter().next().expect("blob is non-empty");
        let contour = trace_contour(&comp, mask.dims());
        let hull = convex_hull(&contour);
        assert_eq!(hull, hull_oracle(&contour), "case {case}");

        let got = convexity_defects(&contour, &hull);
        let want = defects_oracle(&contour, &hull);
        assert_eq!(got.len(), want.len(), "case {case}");
        for (g, w) in got.iter().zip(&want) {
            assert_eq!((g.hull_start, g.hull_end, g.farthest), (w.0, w.1, w.2), "case {case}");
            assert!((g.depth - w.3).abs() <= 1e-9 * w.3.max(1.0), "case {case}");
        }
    }
}

#[test]
fn hull_encloses_every_contour_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4012);
    for _ in 0..40 {
        let mask = random_blob(&mut rng, 64, 64);
        let comp = connected_components(&mask, 1).into_iter().next().unwrap();
        let contour = trace_contour(&comp, mask.dims());
        let hull = convex_hull(&contour);
        let pts = contour.points();
        if hull.len() < 3 {
            continue;
        }
        for k in 0..hull.len() {
            let (a, b) = (pts[hull[k]], pts[hull[(k + 1) % hull.len()]]);
            for &p in pts {
                let o = (b.row as i64 - a.row as i64) * (p.col as i64 - a.col as i64)
                    - (b.col as i64 - a.col as i64) * (p.row as i64 - a.row as i64);
                assert!(o >= 0);
            }
        }
    }
}

#[test]
fn closing_laws_on_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC105);
    for m in [1, 3, 5, 9, 15] {
        let kernel = make_ellipse_kernel(m).unwrap();
        for _ in 0..20 {
            let x = random_mask(&mut rng, 40, 36, 0.3);
            let y = BinaryMask::from_fn(36, 40, |r, c| x.get(r, c) || (r + 2 * c) % 7 == 0);
            let cx = close(&x, &kernel);
            assert!(x.is_subset_of(&cx));
            assert_eq!(close(&cx, &kernel), cx);
            assert!(cx.is_subset_of(&close(&y, &kernel)));
        }
    }
}

fn small_mask() -> impl Strategy<Value = BinaryMask> {
    (1usize..24, 1usize..24)
        .prop_flat_map(|(h, w)| (Just(h), Just(w), prop::collection::vec(any::<bool>(), h * w)))
        .prop_map(|(h, w, bits)| BinaryMask::from_bits(w, h, bits).unwrap())
}

proptest! {
    #[test]
    fn contour_points_belong_to_the_component(mask in small_mask()) {
        for comp in connected_components(&mask, 1) {
            let contour = trace_contour(&comp, mask.dims());
            prop_assert!(!contour.is_empty());
            for p in contour.points() {
                prop_assert!(comp.pixels.binary_search(p).is_ok() || comp.pixels.contains(p));
            }
            let hull = convex_hull(&contour);
            prop_assert_eq!(hull, hull_oracle(&contour));
        }
    }

    #[test]
    fn closing_is_idempotent_and_extensive(mask in small_mask(), m in prop::sample::select(vec![1i64, 3, 5, 7])) {
        let kernel = make_ellipse_kernel(m).unwrap();
        let closed = close(&mask, &kernel);
        prop_assert!(mask.is_subset_of(&closed));
        prop_assert_eq!(close(&closed, &kernel), closed);
    }
}
