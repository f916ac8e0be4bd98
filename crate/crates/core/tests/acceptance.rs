//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{binom, corpus, Explicit};
use toricaut::bundle::{projectivize, ProjectivizedFan};
use toricaut::cayley::{cayley_form, extract_coefficients, fiber_root_substitution};
use toricaut::divisor::{monomials_of_degree, TorusInvariantDivisor};
use toricaut::fan::standard;
use toricaut::fan::Fan;
use toricaut::grading::{class_group, ClassElement};
use toricaut::io::FanFile;
use toricaut::lattice::same_row_lattice;
use toricaut::poly::QPolynomial;
use toricaut::polyhedra::DEFAULT_ENUMERATION_LIMIT as LIMIT;
use toricaut::roots::{
    aut_report, demazure_crosscheck, enumerate_roots, levi_structure, split_roots_of_projectivization, RootKind,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ce(v: &[i64]) -> ClassElement {
    ClassElement::from_i64(v)
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn primes(l: usize, ray: usize, degrees: &[i64]) -> Vec<TorusInvariantDivisor> {
    degrees.iter().map(|&k| TorusInvariantDivisor::prime(l, ray, k)).collect()
}

fn quadric_quartic() -> Result<ProjectivizedFan, String> {
    projectivize(&standard::projective_space(5), primes(6, 0, &[2, 4])).map_err(err)
}

fn c1_quadric_quartic_bundle() -> Check {
    let p = quadric_quartic()?;
    let forms = monomials_of_degree(p.picard(), &p.tautological_class(), LIMIT).map_err(err)?.len() as u64;
    let oracle_forms = binom(7, 2) + binom(9, 4);
    ensure!(forms == 147 && forms == oracle_forms, "dim S_(0,1) = {forms}, oracle {oracle_forms}");

    let rep = aut_report(p.picard(), LIMIT).map_err(err)?;
    // x_i: 6 variables of degree (1,0); y_1: itself plus quadrics times y_2; y_2: itself.
    let oracle_g = 6 * 6 + (1 + binom(7, 2)) + 1;
    ensure!(rep.dim_g as u64 == oracle_g && rep.dim_g == 59, "dim G = {}, oracle {oracle_g}", rep.dim_g);
    ensure!(rep.dim_aut0 == 57, "dim G - torus = {}", rep.dim_aut0);
    ensure!(rep.dim_unipotent_radical as u64 == binom(7, 5), "unipotent radical {}", rep.dim_unipotent_radical);
    let mut mult: Vec<usize> = rep.levi_blocks.iter().map(|b| b.multiplicity).collect();
    mult.sort();
    ensure!(mult == [1, 1, 6], "Levi multiplicities {mult:?}");

    let m = toricaut::roots::moduli_dimension(&p, LIMIT).map_err(err)?;
    ensure!(m.moduli_dim == 90, "moduli dimension {}", m.moduli_dim);
    Ok(format!(
        "dim S_(0,1) = {forms}, dim G = {}, dim G/torus = {}, moduli = {}, Levi GL6 x GL1 x GL1, unipotent {}",
        rep.dim_g, rep.dim_aut0, m.moduli_dim, rep.dim_unipotent_radical
    ))
}

fn c2_classical_inputs() -> Check {
    let g = class_group(&standard::projective_space(5)).map_err(err)?;
    let s2 = monomials_of_degree(&g, &ce(&[2]), LIMIT).map_err(err)?.len() as u64;
    let s4 = monomials_of_degree(&g, &ce(&[4]), LIMIT).map_err(err)?.len() as u64;
    let brute = common::projective_space(5);
    ensure!(s2 == 21 && s2 == binom(7, 5) && brute.monomials(&[2]).len() as u64 == s2, "h0(O(2)) = {s2}");
    ensure!(s4 == 126 && s4 == binom(9, 5) && brute.monomials(&[4]).len() as u64 == s4, "h0(O(4)) = {s4}");
    let rep = aut_report(&g, LIMIT).map_err(err)?;
    let oracle = 6 * brute.monomials(&[1]).len() - 1;
    ensure!(rep.dim_aut0 == 35 && rep.dim_aut0 == oracle, "dim PGL6 = {}, oracle {oracle}", rep.dim_aut0);
    let p = quadric_quartic()?;
    let m = toricaut::roots::moduli_dimension(&p, LIMIT).map_err(err)?;
    ensure!(
        m.classical.projective_section_dims == [20, 125] && m.classical.base_aut0_dim == 35,
        "classical block {:?}",
        m.classical
    );
    Ok(format!("sections {s2}/{s4}, projective dims 20/125, dim PGL6 = {}", rep.dim_aut0))
}

fn c3_weighted_plane() -> Check {
    let fan = standard::weighted_projective_space(&[1, 1, 2, 3]);
    let g = class_group(&fan).map_err(err)?;
    let blocks: Vec<(ClassElement, usize)> =
        levi_structure(&g).into_iter().map(|b| (b.degree, b.multiplicity)).collect();
    ensure!(blocks == [(ce(&[1]), 2), (ce(&[2]), 1), (ce(&[3]), 1)], "Levi blocks {blocks:?}");
    let rep = aut_report(&g, LIMIT).map_err(err)?;
    ensure!(rep.dim_unipotent_radical == 9, "dim H = {}", rep.dim_unipotent_radical);

    let roots = enumerate_roots(&g, LIMIT).map_err(err)?;
    let (z, w) = (2, 3);
    let unip: Vec<_> = roots.iter().filter(|r| r.kind == RootKind::Unipotent).collect();
    let z_type: BTreeSet<Vec<u32>> = unip.iter().filter(|r| r.variable == z).map(|r| r.monomial.clone()).collect();
    let w_type: BTreeSet<Vec<u32>> = unip.iter().filter(|r| r.variable == w).map(|r| r.monomial.clone()).collect();
    // z ↦ z + h(x, y), h quadratic in x and y
    let oracle_z: BTreeSet<Vec<u32>> = (0..=2).map(|a| vec![a, 2 - a, 0, 0]).collect();
    // w ↦ w + g(x, y, z), g of weight 3 without w
    let brute = common::weighted(&[1, 1, 2, 3]);
    let oracle_w: BTreeSet<Vec<u32>> = brute.monomials(&[3]).into_iter().filter(|m| m[3] == 0).collect();
    ensure!(z_type == oracle_z, "z-type roots {z_type:?}");
    ensure!(w_type == oracle_w && w_type.len() == 6, "w-type roots {w_type:?}");
    ensure!(unip.len() == z_type.len() + w_type.len(), "unipotent roots outside z and w");
    Ok(format!("Levi GL2 x GL1 x GL1, H = {}, {} z-type + {} w-type", unip.len(), z_type.len(), w_type.len()))
}

/// Random effective bundles (two summands) on each of the four base fans.
fn bundle_corpus(seed: u64) -> Vec<(&'static str, Fan, Explicit, Vec<Vec<i64>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<(&'static str, Fan, Explicit, i64)> = vec![
        ("P1", standard::projective_space(1), common::projective_space(1), 4),
        ("P2", standard::projective_space(2), common::projective_space(2), 3),
        ("P1xP1", standard::p1_x_p1(), common::p1_x_p1(), 3),
        ("P5", standard::projective_space(5), common::projective_space(5), 2),
    ];
    let mut out = Vec::new();
    for (name, fan, explicit, max) in bases {
        let l = fan.num_rays();
        for _ in 0..5 {
            let divisors: Vec<Vec<i64>> = (0..2)
                .map(|_| (0..l).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..=max) } else { 0 }).collect())
                .collect();
            out.push((name, fan.clone(), explicit.clone(), divisors));
        }
    }
    out
}

fn c4_split_picard_kernel() -> Check {
    let cases = bundle_corpus(4);
    for (name, base, explicit, divisors) in &cases {
        let ds = divisors.iter().cloned().map(TorusInvariantDivisor::new).collect();
        let p = projectivize(base, ds).map_err(err)?;
        let split = p.picard().kernel_lattice();
        let direct = class_group(p.fan()).map_err(err)?.kernel_lattice();
        let characters = p.fan().ray_matrix().transpose();
        ensure!(same_row_lattice(&split, &direct), "{name} {divisors:?}: split kernel differs from fan class group");
        ensure!(same_row_lattice(&split, &characters), "{name} {divisors:?}: kernel is not the image of M");
        let oracle = explicit.projectivized(divisors);
        for k in 0..split.rows() {
            let v: Vec<i64> = split.row(k).iter().map(|x| i64::try_from(x).unwrap()).collect();
            let deg: Vec<i64> = (0..oracle.functional.len())
                .map(|c| v.iter().zip(&oracle.degrees).map(|(a, d)| a * d[c]).sum())
                .collect();
            ensure!(deg.iter().all(|&x| x == 0), "{name} {divisors:?}: kernel vector {v:?} has degree {deg:?}");
        }
        ensure!(split.rows() == p.fan().rank(), "{name}: kernel rank {}", split.rows());
    }
    Ok(format!("{} bundles over P1, P2, P1xP1, P5", cases.len()))
}

fn c5_root_split() -> Check {
    let cases = bundle_corpus(5);
    let mut total_roots = 0;
    for (name, base, explicit, divisors) in &cases {
        let ds = divisors.iter().cloned().map(TorusInvariantDivisor::new).collect();
        let p = projectivize(base, ds).map_err(err)?;
        let split = split_roots_of_projectivization(&p, LIMIT).map_err(err)?;
        let all = enumerate_roots(p.picard(), LIMIT).map_err(err)?;
        let oracle = explicit.projectivized(divisors).roots();
        let got: BTreeSet<(usize, Vec<u32>)> = all.iter().map(|r| (r.variable, r.monomial.clone())).collect();
        ensure!(got == oracle, "{name} {divisors:?}: root set differs from brute force");

        let l = base.num_rays();
        let key = |r: &toricaut::roots::Root| (r.variable, r.monomial.clone());
        let b: BTreeSet<_> = split.base_roots.iter().map(key).collect();
        let f: BTreeSet<_> = split.fiber_roots.iter().map(key).collect();
        ensure!(b.is_disjoint(&f), "{name}: base and fiber roots overlap");
        let union: BTreeSet<_> = b.union(&f).cloned().collect();
        ensure!(union == got, "{name}: split is not total");
        for (v, m) in &b {
            ensure!(*v < l && m[l..].iter().all(|&k| k == 0), "{name}: base root touches y");
        }
        for (v, m) in &f {
            ensure!(*v >= l && m[l..].iter().sum::<u32>() == 1 && m[*v] == 0, "{name}: bad fiber root");
        }

        let base_unip = explicit.roots().iter().filter(|(_, m)| m.iter().sum::<u32>() > 1).count();
        let total_unip = all.iter().filter(|r| r.kind == RootKind::Unipotent).count();
        ensure!(
            split.base_unipotent() == base_unip,
            "{name}: base unipotent {} vs {base_unip}",
            split.base_unipotent()
        );
        ensure!(
            total_unip == split.base_unipotent() + split.fiber_unipotent(),
            "{name}: unipotent counts not additive"
        );
        total_roots += got.len();
    }
    Ok(format!("{} bundles, {total_roots} roots classified, no overlaps", cases.len()))
}

fn random_section(p: &ProjectivizedFan, alpha: &ClassElement, rng: &mut ChaCha8Rng) -> Result<QPolynomial, String> {
    let monos = monomials_of_degree(p.base_grading(), alpha, LIMIT).map_err(err)?;
    let mut terms = Vec::new();
    for e in monos {
        if rng.gen_bool(0.7) {
            let c = BigRational::new(BigInt::from(rng.gen_range(-5..=5)), BigInt::from(rng.gen_range(1..=3)));
            terms.push((e, c));
        }
    }
    Ok(QPolynomial::from_terms(p.num_base(), terms))
}

fn c6_coefficient_law() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let bases = [
        standard::projective_space(1),
        standard::projective_space(2),
        standard::p1_x_p1(),
        standard::hirzebruch(1),
        standard::hirzebruch(2),
    ];
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        ensure!(attempts < 10_000, "could not draw enough instances with fiber roots");
        let base = &bases[rng.gen_range(0..bases.len())];
        let l = base.num_rays();
        let r = rng.gen_range(2..=3);
        let ds: Vec<TorusInvariantDivisor> =
            (0..r).map(|_| TorusInvariantDivisor::new((0..l).map(|_| rng.gen_range(0..=2)).collect())).collect();
        let p = projectivize(base, ds).map_err(err)?;
        let split = split_roots_of_projectivization(&p, LIMIT).map_err(err)?;
        if split.fiber_roots.is_empty() {
            continue;
        }
        let root = &split.fiber_roots[rng.gen_range(0..split.fiber_roots.len())];
        let t = root.variable - l;
        let s = (0..r).find(|&j| root.monomial[l + j] == 1).unwrap();
        let k = BigRational::from(BigInt::from(rng.gen_range(1..=7)));
        let h = QPolynomial::monomial(root.monomial[..l].to_vec(), k);

        let fs: Vec<QPolynomial> =
            p.bundle().classes().iter().map(|a| random_section(&p, a, &mut rng)).collect::<Result<_, _>>()?;
        let form = cayley_form(&fs, &p).map_err(err)?;
        let tau = fiber_root_substitution(&p, t, s, &h).map_err(err)?;
        let got = extract_coefficients(&tau.apply(form.form()), &p).map_err(err)?;
        for j in 0..r {
            let expect = if j == s { fs[s].add(&fs[t].mul(&h)) } else { fs[j].clone() };
            ensure!(got[j] == expect, "slot {} differs for root y{} -> y{} + h*y{}", j + 1, t + 1, t + 1, s + 1);
        }
        done += 1;
    }
    Ok(format!("{done} random instances, exact equality"))
}

fn c7_hirzebruch() -> Check {
    for n in 0..4i64 {
        let p = projectivize(&standard::projective_space(1), primes(2, 0, &[0, n])).map_err(err)?;
        let expected = standard::hirzebruch(n);
        let got: BTreeSet<Vec<i64>> = p.fan().rays().iter().cloned().collect();
        let want: BTreeSet<Vec<i64>> = expected.rays().iter().cloned().collect();
        ensure!(got == want, "F_{n} rays {got:?}");
        // compare cones as sets of ray vectors
        let cones = |f: &Fan| -> BTreeSet<BTreeSet<Vec<i64>>> {
            f.max_cones().iter().map(|c| c.iter().map(|&i| f.ray(i).to_vec()).collect()).collect()
        };
        ensure!(cones(p.fan()) == cones(&expected), "F_{n} cones differ");
        ensure!(
            p.fan().validate().is_valid() && p.fan().is_complete() && p.fan().is_smooth().smooth,
            "F_{n} not smooth complete"
        );
    }
    let mut dims = Vec::new();
    for n in 1..4i64 {
        let p = projectivize(&standard::projective_space(1), primes(2, 0, &[0, n])).map_err(err)?;
        let oracle = common::projective_space(1).projectivized(&[vec![0, 0], vec![n, 0]]);
        // dim G = roots + diagonal torus of GL blocks; subtract the rank 2 quotient torus
        let brute = oracle.roots().len() + oracle.degrees.len() - 2;
        let lib = aut_report(p.picard(), LIMIT).map_err(err)?.dim_aut0;
        ensure!(brute == n as usize + 5 && lib == brute, "dim Aut0(F_{n}): brute {brute}, library {lib}");
        dims.push(lib);
    }
    Ok(format!("F_0..F_3 fans match; dim Aut0(F_1..F_3) = {dims:?}"))
}

fn corpus_fans() -> Result<Vec<(String, Fan)>, String> {
    let mut names: Vec<String> = std::fs::read_dir(corpus(""))
        .map_err(err)?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".fan") || n.ends_with(".pfan"))
        .collect();
    names.sort();
    names.into_iter().map(|n| FanFile::load(&corpus(&n)).map(|f| (n, f.fan())).map_err(err)).collect()
}

fn c8_demazure() -> Check {
    let mut checked = Vec::new();
    for (name, fan) in corpus_fans()? {
        if !fan.is_complete() || !fan.is_smooth().smooth {
            continue;
        }
        let rep = demazure_crosscheck(&fan, LIMIT).map_err(err)?;
        ensure!(
            rep.bijective && rep.root_count == rep.lattice_pair_count,
            "{name}: {} vs {}",
            rep.root_count,
            rep.lattice_pair_count
        );
        for w in &rep.witness {
            for (j, e) in fan.rays().iter().enumerate() {
                let v = common::dot(e, &w.m);
                if j == w.ray {
                    ensure!(v == -1 && w.monomial[j] == 0, "{name}: bad pairing at ray {j}");
                } else {
                    ensure!(v >= 0 && w.monomial[j] as i64 == v, "{name}: witness exponent mismatch at ray {j}");
                }
            }
        }
        if fan.rank() <= 3 {
            let box_count = brute_lattice_pairs(&fan, 6);
            ensure!(box_count == rep.lattice_pair_count, "{name}: box count {box_count}");
        }
        checked.push(format!("{name}={}", rep.root_count));
    }
    ensure!(checked.len() >= 8, "only {} smooth complete fans in corpus", checked.len());
    Ok(checked.join(" "))
}

fn brute_lattice_pairs(fan: &Fan, b: i64) -> usize {
    let d = fan.rank();
    let mut count = 0;
    let mut m = vec![-b; d];
    loop {
        for i in 0..fan.num_rays() {
            let ok = fan.rays().iter().enumerate().all(|(j, e)| {
                let v = common::dot(e, &m);
                if j == i {
                    v == -1
                } else {
                    v >= 0
                }
            });
            count += usize::from(ok);
        }
        let mut k = 0;
        while k < d && m[k] == b {
            m[k] = -b;
            k += 1;
        }
        if k == d {
            return count;
        }
        m[k] += 1;
    }
}

fn c9_json_determinism() -> Check {
    let exe = env!("CARGO_BIN_EXE_toricaut");
    let dir = tempfile::tempdir().map_err(err)?;
    let out_a = dir.path().join("a.pfan");
    let out_b = dir.path().join("b.pfan");
    let c = |n: &str| corpus(n).display().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["moduli-dim".into(), c("p5.fan"), c("e24.bundle")],
        vec!["aut-report".into(), c("p1123.fan")],
        vec!["roots".into(), c("p1xp1.fan")],
        vec!["split-roots".into(), c("p5_e24.pfan")],
        vec!["classgroup".into(), c("p5_e24.pfan")],
        vec!["demazure-check".into(), c("f3.fan")],
        vec!["cayley".into(), c("p5_e24.pfan"), "--forms".into(), c("e24.forms")],
        vec!["sections".into(), c("p1123.fan"), "--degree".into(), "6".into()],
    ];
    for args in &commands {
        let run = || Command::new(exe).arg("--json").args(args).output();
        let (a, b) = (run().map_err(err)?, run().map_err(err)?);
        ensure!(a.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&a.stderr));
        ensure!(a.stdout == b.stdout, "{args:?}: output differs between runs");
        let text = String::from_utf8(a.stdout).map_err(err)?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(err)?;
        ensure!(toricaut::io::to_canonical_json(&v) == text, "{args:?}: keys not sorted or not canonical");
    }
    for out in [&out_a, &out_b] {
        let st = Command::new(exe)
            .args(["projectivize", &c("p5.fan"), &c("e24.bundle"), "-o"])
            .arg(out)
            .output()
            .map_err(err)?;
        ensure!(st.status.success(), "projectivize failed");
    }
    let a = std::fs::read(&out_a).map_err(err)?;
    ensure!(a == std::fs::read(&out_b).map_err(err)?, "projectivize output differs between runs");
    ensure!(a == std::fs::read(corpus("p5_e24.pfan")).map_err(err)?, "projectivize output differs from corpus file");
    Ok(format!("{} commands byte-stable, projectivize reproduces corpus file", commands.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("quadric-quartic bundle over P5", c1_quadric_quartic_bundle),
        ("classical section counts and PGL6", c2_classical_inputs),
        ("weighted projective plane P(1,1,2,3)", c3_weighted_plane),
        ("split Picard kernel equals fan kernel", c4_split_picard_kernel),
        ("base/fiber root split", c5_root_split),
        ("fiber root coefficient law", c6_coefficient_law),
        ("Hirzebruch surfaces", c7_hirzebruch),
        ("Demazure lattice roots", c8_demazure),
        ("JSON determinism", c9_json_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
