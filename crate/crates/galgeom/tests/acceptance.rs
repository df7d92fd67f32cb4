//! Acceptance sweep: one test per numbered criterion, each printing a single
//! PASS/FAIL line (visible with --nocapture, and on any failure).  Budgets are
//! asserted so a quadratic regression in the enumerators shows up here.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use galgeom::constructions::{
    cone, construction_one, construction_two, hypercylinder, hyperoval_conic_nucleus,
    moore_h_scattered,
};
use galgeom::error::Error;
use galgeom::galois::{Field, Tower};
use galgeom::hamming;
use galgeom::linalg;
use galgeom::linset::predicted_t;
use galgeom::pg::{Point, Space};
use galgeom::psets::{verify_plane_km_theorem, verify_space_theorem, PointSet};
use galgeom::rank;

fn se(e: Error) -> String {
    e.to_string()
}

fn ck(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn finish(n: u32, what: &str, budget_s: u64, started: Instant, r: Result<(), String>) {
    let secs = started.elapsed().as_secs_f64();
    match &r {
        Ok(()) => println!("ACCEPTANCE {n} PASS ({secs:.1}s): {what}"),
        Err(e) => println!("ACCEPTANCE {n} FAIL ({secs:.1}s): {what} -- {e}"),
    }
    if let Err(e) = r {
        panic!("criterion {n} failed: {e}");
    }
    assert!(
        secs < budget_s as f64,
        "criterion {n} blew its {budget_s}s budget ({secs:.1}s)"
    );
}

#[test]
fn criterion_1_hyperplane_count_formula_is_exact() {
    let t0 = Instant::now();
    let r = (|| -> Result<(), String> {
        for (q, n, rr, h) in [
            (2u64, 2u32, 2usize, 1usize),
            (2, 3, 2, 1),
            (3, 2, 2, 1),
            (2, 3, 3, 2),
        ] {
            let tower = Tower::for_q(q, n).map_err(se)?;
            let ls = moore_h_scattered(tower, rr, h).map_err(se)?;
            let predicted = predicted_t(q, n as u64, rr as u64, h as u64).map_err(se)?;
            let counted = ls.hyperplane_profile().map_err(se)?.weight_counts();
            let k = rr * n as usize / (h + 1);
            let mut accounted = 0u64;
            for (i, ti) in predicted.iter().enumerate() {
                let gamma = k as i64 - n as i64 + i as i64;
                let got = if gamma < 0 {
                    0
                } else {
                    counted.get(&(gamma as usize)).copied().unwrap_or(0)
                };
                ck(
                    BigUint::from(got) == *ti,
                    &format!("(q,n,r,h)=({q},{n},{rr},{h}): t_{i} predicted {ti}, counted {got}"),
                )?;
                accounted += got;
            }
            let total: u64 = counted.values().sum();
            ck(
                accounted == total,
                &format!("(q,n,r,h)=({q},{n},{rr},{h}): stray hyperplane weights"),
            )?;
        }
        Ok(())
    })();
    finish(
        1,
        "predicted hyperplane-weight counts match brute force on four towers",
        240,
        t0,
        r,
    );
}

#[test]
fn criterion_2_cone_hyperplane_profile() {
    let t0 = Instant::now();
    let r = (|| -> Result<(), String> {
        let tower = Tower::for_q(2, 2).map_err(se)?;
        let base = moore_h_scattered(tower, 2, 1).map_err(se)?;
        let c = cone(&base, 3).map_err(se)?;
        let expected = c.expected_hyperplane_profile().map_err(se)?;
        let counted = c.linset().hyperplane_profile().map_err(se)?.size_counts();
        ck(
            expected.len() == counted.len(),
            &format!("{} predicted sizes vs {} realized", expected.len(), counted.len()),
        )?;
        for (size, want) in &expected {
            let got = counted
                .iter()
                .find(|(s, _)| BigUint::from(**s) == *size)
                .map(|(_, m)| BigUint::from(*m))
                .unwrap_or_default();
            ck(got == *want, &format!("size {size}: predicted {want}, counted {got}"))?;
        }
        Ok(())
    })();
    finish(
        2,
        "both hyperplane families of the (2,2,3,2,1) cone match enumeration",
        10,
        t0,
        r,
    );
}

#[test]
fn criterion_3_first_extension_type_with_r_equal_d() {
    let t0 = Instant::now();
    let r = (|| -> Result<(), String> {
        let tower = Tower::for_q(2, 2).map_err(se)?;
        let base = moore_h_scattered(tower, 2, 1).map_err(se)?;
        let c = cone(&base, 2).map_err(se)?;
        let ext = construction_one(&c).map_err(se)?;
        let profile = ext.point_set().profile(1).map_err(se)?;
        let realized: BTreeSet<BigUint> =
            profile.realized().into_iter().map(BigUint::from).collect();
        let predicted = ext.expected_hyperplane_sizes().map_err(se)?;
        ck(
            realized == predicted,
            &format!("realized {realized:?} vs predicted {predicted:?}"),
        )?;
        for excl in ext.excluded_hyperplane_sizes().map_err(se)? {
            ck(
                !realized.contains(&excl),
                &format!("excluded size {excl} was realized"),
            )?;
        }
        Ok(())
    })();
    finish(
        3,
        "first-extension line type over (2,2,2,2,1) is exact, excluded size absent",
        10,
        t0,
        r,
    );
}

#[test]
fn criterion_4_second_extension_hyperoval_and_size_formula() {
    let t0 = Instant::now();
    let r = (|| -> Result<(), String> {
        let tower = Tower::for_q(2, 2).map_err(se)?;
        let base = moore_h_scattered(tower, 2, 1).map_err(se)?;
        let c = cone(&base, 2).map_err(se)?;
        let ext = construction_two(&c).map_err(se)?;
        let set = ext.point_set();
        ck(set.len() == 6, &format!("expected 6 points, got {}", set.len()))?;
        let profile = set.profile(1).map_err(se)?;
        ck(
            profile.is_type_exact(&[0, 2]),
            &format!("line type {:?}, wanted (0,2)", profile.realized()),
        )?;
        ck(
            set.recognize_km_arc().map_err(se)? == Some(2),
            "6-point set not recognized as a type-2 arc (hyperoval)",
        )?;

        // |K| = 2^{n(r-d)} ([d]_{2^n} + 1) on three further parameter sets
        for (n, rr, want) in [(2u32, 3usize, 24usize), (3, 2, 10), (2, 4, 96)] {
            let tower = Tower::for_q(2, n).map_err(se)?;
            let base = moore_h_scattered(tower, 2, 1).map_err(se)?;
            let c = cone(&base, rr).map_err(se)?;
            let ext = construction_two(&c).map_err(se)?;
            ck(
                ext.point_set().len() == want,
                &format!("(2,{n},{rr},2,1): size {} != {want}", ext.point_set().len()),
            )?;
            let formula = BigUint::from(2u64).pow(n * (rr as u32 - 2))
                * (BigUint::from(2u64).pow(n) + 2u64);
            ck(
                BigUint::from(ext.point_set().len()) == formula,
                &format!("(2,{n},{rr},2,1): closed form {formula} missed"),
            )?;
        }
        Ok(())
    })();
    finish(
        4,
        "second extension over (2,2,2,2,1) is a hyperoval; size formula holds thrice",
        40,
        t0,
        r,
    );
}

#[test]
fn criterion_5_hypercylinder_census_recognition_perturbation() {
    let t0 = Instant::now();
    let r = (|| -> Result<(), String> {
        let f = Field::shared(2, 2).map_err(se)?;
        let hyp = hyperoval_conic_nucleus(f.clone()).map_err(se)?;
        let (set, _) = hypercylinder(3, &hyp).map_err(se)?;
        ck(set.len() == 24, &format!("size {} != 24", set.len()))?;
        let lines = set.profile(1).map_err(se)?;
        ck(
            lines.is_type_exact(&[0, 2, 4]),
            &format!("line type {:?}", lines.realized()),
        )?;
        let planes = set.profile(2).map_err(se)?;
        ck(
            planes.is_type_exact(&[0, 6, 8]),
            &format!("plane type {:?}", planes.realized()),
        )?;

        let report = verify_plane_km_theorem(&set, 4).map_err(se)?;
        ck(report.items.len() == 9, &format!("{} census items", report.items.len()))?;
        for item in &report.items {
            ck(item.pass, &format!("census item '{}' failed", item.name))?;
        }

        let rec = set.recognize_hypercylinder().map_err(se)?;
        let (vertex, base) = rec.ok_or("recognizer missed the hypercylinder")?;
        ck(vertex.dim() == 0, "vertex dimension")?;

        // the base, re-coordinatized inside its own plane, is a hyperoval
        let space = set.space();
        let fq = space.field();
        let plane_pts: Vec<&Point> = base.points().iter().collect();
        let plane = space.span_points(&plane_pts);
        ck(plane.dim() == 2, "base does not span a plane")?;
        let mut proj = Vec::new();
        for p in base.points() {
            let c = plane
                .coordinates_of(fq, p)
                .ok_or("base point escapes its plane")?;
            proj.push(Point::new(fq, &c).map_err(se)?);
        }
        let proj = PointSet::new(Space::new(fq.clone(), 2), proj).map_err(se)?;
        ck(proj.recognize_km_arc().map_err(se)? == Some(2), "base is not a hyperoval")?;

        // round trip: the recognizer's vertex and base rebuild the input
        let mut rebuilt: BTreeSet<Point> = BTreeSet::new();
        for b in base.points() {
            let line = space.span(&[&vertex, &space.span_points(&[b])]);
            for p in line.points(fq).map_err(se)? {
                if !vertex.contains_point(fq, &p) {
                    rebuilt.insert(p);
                }
            }
        }
        ck(
            rebuilt.len() == set.len()
                && rebuilt.iter().zip(set.points()).all(|(a, b)| a == b),
            "recognizer output does not rebuild the input set",
        )?;

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..100 {
            let perturbed = set.perturb_one_point(&mut rng).map_err(se)?;
            let verdict = match perturbed.recognize_hypercylinder() {
                Ok(v) => v.is_some(),
                Err(Error::Hypothesis(_)) => false,
                Err(e) => return Err(se(e)),
            };
            ck(!verdict, &format!("perturbation {trial} was accepted"))?;
        }

        let f4 = Field::shared(2, 2).map_err(se)?;
        let hyp4 = hyperoval_conic_nucleus(f4).map_err(se)?;
        let (big, _) = hypercylinder(4, &hyp4).map_err(se)?;
        ck(big.len() == 96, &format!("(4,4) size {} != 96", big.len()))?;
        let report = verify_space_theorem(&big, 16).map_err(se)?;
        for item in &report.items {
            ck(item.pass, &format!("space census item '{}' failed", item.name))?;
        }
        Ok(())
    })();
    finish(
        5,
        "hypercylinder census, recognition round trip, 100 rejected perturbations",
        660,
        t0,
        r,
    );
}

#[test]
fn criterion_6_even_set_lower_bound_with_equality() {
    let t0 = Instant::now();
    let r = (|| -> Result<(), String> {
        // (set, Q, N, expect_equality)
        let mut cases: Vec<(PointSet, u64, u32, bool)> = Vec::new();

        for (q, deg, rr) in [(2u64, 1u32, 3usize), (4, 2, 3), (2, 1, 4), (4, 2, 4)] {
            let f = Field::shared(2, deg).map_err(se)?;
            let hyp = hyperoval_conic_nucleus(f).map_err(se)?;
            let (set, _) = hypercylinder(rr, &hyp).map_err(se)?;
            cases.push((set, q, rr as u32, true));
        }
        let f4 = Field::shared(2, 2).map_err(se)?;
        cases.push((hyperoval_conic_nucleus(f4).map_err(se)?, 4, 2, true));

        // the q=2 second extension is an even set in PG(3,4)
        let tower = Tower::for_q(2, 2).map_err(se)?;
        let base = moore_h_scattered(tower, 2, 1).map_err(se)?;
        let ext = construction_two(&cone(&base, 3).map_err(se)?).map_err(se)?;
        cases.push((ext.point_set().clone(), 4, 3, true));

        for (set, q, nn, expect_eq) in &cases {
            ck(
                set.is_even_set().map_err(se)?,
                &format!("set of size {} in PG({nn},{q}) is not even", set.len()),
            )?;
            let bound = q.pow(nn - 1) + 2 * q.pow(nn - 2);
            ck(
                set.len() as u64 >= bound,
                &format!("even set of size {} under bound {bound}", set.len()),
            )?;
            if *expect_eq {
                ck(
                    set.len() as u64 == bound,
                    &format!("expected equality: {} vs {bound}", set.len()),
                )?;
            }
        }
        Ok(())
    })();
    finish(
        6,
        "every even set in the suite meets the size bound, tight on hypercylinders",
        60,
        t0,
        r,
    );
}

#[test]
fn criterion_7_hypercylinder_code_and_stability_verdict() {
    let t0 = Instant::now();
    let r = (|| -> Result<(), String> {
        let code = hamming::hypercylinder_code(4, 3).map_err(se)?;
        ck(code.n() == 24, &format!("n = {}", code.n()))?;
        ck(code.k() == 4, &format!("k = {}", code.k()))?;
        ck(code.min_distance() == 16, &format!("d = {}", code.min_distance()))?;
        let weights: BTreeSet<u64> = code.weights();
        ck(
            weights == BTreeSet::from([16, 18, 24]),
            &format!("weights {weights:?}"),
        )?;
        let direct = code.weight_distribution_codeword_sweep().map_err(se)?;
        ck(
            direct == code.weight_distribution(),
            "codeword sweep disagrees with the hyperplane sweep",
        )?;
        let verdict = hamming::stability_decide(&code, 4, 3, 4).map_err(se)?;
        ck(verdict.is_hypercylinder, "verdict missed the hypercylinder")?;
        ck(verdict.t_resolved == Some(4), &format!("t resolved to {:?}", verdict.t_resolved))?;
        Ok(())
    })();
    finish(
        7,
        "the (4,3) code is [24,4,16] with weights {16,18,24}, dual sweeps agree",
        10,
        t0,
        r,
    );
}

#[test]
fn criterion_8_rank_codes_dual_route_and_weight_windows() {
    let t0 = Instant::now();
    let r = (|| -> Result<(), String> {
        for (q, n) in [(2u64, 2u32), (2, 3), (3, 2)] {
            for rr in [2usize, 3] {
                let code = rank::cone_rank_code(q, n, rr, 2, 1).map_err(se)?;
                let rep = rank::verify_relweight(&code, 0).map_err(se)?;
                ck(
                    rep.exhaustive,
                    &format!("cone ({q},{n},{rr}): dual-route check not exhaustive"),
                )?;
                ck(
                    code.min_distance().map_err(se)? == (n - 1) as usize,
                    &format!("cone ({q},{n},{rr}): min distance"),
                )?;
                let allowed: BTreeSet<usize> = [(n - 1) as usize, n as usize].into();
                ck(
                    code.weights().map_err(se)?.is_subset(&allowed),
                    &format!("cone ({q},{n},{rr}): weights escape {{n-1, n}}"),
                )?;

                let code = rank::construction_one_rank_code(q, n, rr, 2, 1).map_err(se)?;
                let rep = rank::verify_relweight(&code, 0).map_err(se)?;
                ck(
                    rep.exhaustive,
                    &format!("extension ({q},{n},{rr}): dual-route check not exhaustive"),
                )?;
                ck(
                    code.min_distance().map_err(se)? == 1,
                    &format!("extension ({q},{n},{rr}): min distance"),
                )?;
                let mut allowed: BTreeSet<usize> = [1].into();
                for w in (n - 1) as usize..=(n + 1) as usize {
                    allowed.insert(w);
                }
                ck(
                    code.weights().map_err(se)?.is_subset(&allowed),
                    &format!("extension ({q},{n},{rr}): weights escape the window"),
                )?;
            }
        }
        Ok(())
    })();
    finish(
        8,
        "rank codes over three towers: exhaustive dual-route agreement + windows",
        60,
        t0,
        r,
    );
}

#[test]
fn criterion_9_substitution_note_and_pg25_oval_sweep() {
    let t0 = Instant::now();
    println!(
        "ACCEPTANCE 9 NOTE: classifying every point set of a given size and \
         intersection type is combinatorially infeasible at any interesting scale \
         (binomial(|PG|, size) candidates); the converse direction is covered \
         instead by criterion 5's recognition round trip and its 100 seeded \
         one-point perturbations, every one of which must be rejected."
    );
    let r = (|| -> Result<(), String> {
        // Exhaustive corroboration of Segre's theorem at q = 5: every 6-arc
        // (oval) of PG(2,5) lies on a nondegenerate conic, and there are
        // exactly as many as |PGL(3,5)| / |PGL(2,5)| = 3100 conics.
        let f = Field::shared(5, 1).map_err(se)?;
        let space = Space::new(f.clone(), 2);
        let pts: Vec<_> = space.points().map_err(se)?.collect();
        ck(pts.len() == 31, "PG(2,5) has 31 points")?;

        let mut line_masks: Vec<u32> = Vec::new();
        for hp in space.hyperplanes().map_err(se)? {
            let mut mask = 0u32;
            for (i, p) in pts.iter().enumerate() {
                if hp.contains(&f, p) {
                    mask |= 1 << i;
                }
            }
            line_masks.push(mask);
        }
        ck(line_masks.len() == 31, "PG(2,5) has 31 lines")?;
        // line through a pair = the unique line mask containing both bits
        let mut through = vec![vec![0u32; 31]; 31];
        for i in 0..31 {
            for j in (i + 1)..31 {
                let both = (1u32 << i) | (1 << j);
                let m = line_masks
                    .iter()
                    .find(|&&m| m & both == both)
                    .ok_or("two points on no common line")?;
                through[i][j] = *m;
                through[j][i] = *m;
            }
        }

        let conic_row = |p: &galgeom::pg::Point| -> Vec<u32> {
            let c = p.coords();
            let (x, y, z) = (c[0], c[1], c[2]);
            vec![
                f.mul(x, x),
                f.mul(y, y),
                f.mul(z, z),
                f.mul(x, y),
                f.mul(x, z),
                f.mul(y, z),
            ]
        };

        // depth-first arc extension: `forbidden` holds every point on a
        // secant of the arc so far, so candidates keep the arc condition
        fn extend(
            chosen: &mut Vec<usize>,
            start: usize,
            forbidden: u32,
            through: &[Vec<u32>],
            found: &mut Vec<Vec<usize>>,
        ) {
            if chosen.len() == 6 {
                found.push(chosen.clone());
                return;
            }
            for k in start..31 {
                if forbidden & (1 << k) != 0 {
                    continue;
                }
                let mut next_forbidden = forbidden;
                for &c in chosen.iter() {
                    next_forbidden |= through[c][k];
                }
                chosen.push(k);
                extend(chosen, k + 1, next_forbidden, through, found);
                chosen.pop();
            }
        }
        let mut found = Vec::new();
        extend(&mut Vec::new(), 0, 0, &through, &mut found);
        ck(
            found.len() == 3100,
            &format!("{} ovals found, expected 3100", found.len()),
        )?;
        for arc in &found {
            let rows: Vec<Vec<u32>> = arc.iter().map(|&i| conic_row(&pts[i])).collect();
            let kernel = linalg::kernel_basis(&f, &rows);
            ck(
                !kernel.is_empty(),
                &format!("oval {arc:?} lies on no conic"),
            )?;
        }
        Ok(())
    })();
    finish(
        9,
        "all 3100 ovals of PG(2,5) are conics (exhaustive arc sweep)",
        600,
        t0,
        r,
    );
}
