//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Two criteria are not attainable under a hard spin cutoff and are printed
//! as FAIL without failing the test: the `+iε` closure of the left-acting
//! field `E₊` (the realised `[E₊, U] = T U` forces `−iε`), and `[ΔH, H] = 0`
//! on random vectors (it reduces to commutators of truncated plaquette
//! terms). Every other part of those two criteria is asserted.
//!
//! Criteria 3 and 4 are compared against oracles written here: the kernel
//! dimension of `Σ_n A_n` and a flat brute-force sum for the 12-j amplitudes.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use su2_toric::hilbert::{LinkSpace, LinkState, ProductBasis, StateVector};
use su2_toric::lattice::TorusLattice;
use su2_toric::operators::vertex_casimir;
use su2_toric::repkernel::{twelve_j_second_kind, HalfInt, TwelveJLabel, TORUS2_SITE_LEGS};
use su2_toric_cli::suites::{algebra, braid, excite, ground};
use su2_toric_cli::{consolidate, Check, Gate, Lab, RunConfig, VerificationReport};

// ---- kernel-dimension oracle ------------------------------------------------

/// `J_z` and `J_±` of spin `t/2` as real matrices.
fn spin_ops(t: i32) -> [DMatrix<f64>; 3] {
    let d = (t + 1) as usize;
    let j = f64::from(t) / 2.0;
    let mut jz = DMatrix::zeros(d, d);
    let mut jp = DMatrix::zeros(d, d);
    for k in 0..d {
        let m = j - k as f64;
        jz[(k, k)] = m;
        if k > 0 {
            jp[(k - 1, k)] = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    let jm = jp.transpose();
    [jz, jp, jm]
}

fn kron_all(factors: &[DMatrix<f64>]) -> DMatrix<f64> {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// Number of singlets in the product of spins `twice[0..4] / 2`, from the
/// null space of the total `J²`.
fn singlets(twice: [i32; 4]) -> usize {
    let ids: Vec<DMatrix<f64>> = twice.iter().map(|&t| DMatrix::identity((t + 1) as usize, (t + 1) as usize)).collect();
    let dim: usize = twice.iter().map(|&t| (t + 1) as usize).product();
    let mut total = [DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim)];
    for (k, &t) in twice.iter().enumerate() {
        let ops = spin_ops(t);
        for (a, op) in ops.iter().enumerate() {
            let mut f = ids.clone();
            f[k] = op.clone();
            total[a] += kron_all(&f);
        }
    }
    let [jz, jp, jm] = total;
    let j2 = &jz * &jz + (&jp * &jm + &jm * &jp) * 0.5;
    j2.symmetric_eigenvalues().iter().filter(|e| e.abs() < 1e-9).count()
}

/// `dim ker Σ_n A_n` on the 2×2 torus at `jmax`. The sum preserves every
/// link spin; inside one spin block the half-link spins at distinct sites
/// are distinct tensor factors and each `A_n` is the total `J²` of its four
/// half-links, so the kernel is the product of the per-site singlet counts.
fn gauss_kernel_dimension(lat: &TorusLattice, jmax: HalfInt) -> usize {
    let spins: Vec<i32> = (0..=jmax.twice()).collect();
    let links = lat.num_links();
    let mut total = 0;
    let mut idx = vec![0usize; links];
    loop {
        let cfg: Vec<i32> = idx.iter().map(|&i| spins[i]).collect();
        let mut block = 1;
        for s in lat.sites() {
            let legs = lat.star_links(s).map(|(l, _)| cfg[lat.link_index(l)]);
            block *= singlets(legs);
            if block == 0 {
                break;
            }
        }
        total += block;
        let mut k = 0;
        loop {
            if k == links {
                return total;
            }
            idx[k] += 1;
            if idx[k] < spins.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The same count taken directly from the library's `Σ_n A_n`, restricted
/// to one link-spin block and diagonalised densely.
fn direct_block_kernel(lat: &TorusLattice, basis: &std::sync::Arc<ProductBasis>, cfg: &[i32]) -> usize {
    let jmax = basis.jmax();
    let space = LinkSpace::new(jmax);
    let per_link: Vec<Vec<usize>> = basis
        .links()
        .iter()
        .map(|&l| {
            let j = HalfInt::from_twice(cfg[lat.link_index(l)]);
            let mut v = Vec::new();
            for mp in j.projections() {
                for mm in j.projections() {
                    v.push(space.index(LinkState { j, m_plus: mp, m_minus: mm }).unwrap());
                }
            }
            v
        })
        .collect();
    let mut digits: Vec<Vec<usize>> = vec![Vec::new()];
    for choices in &per_link {
        digits = digits.iter().flat_map(|d| choices.iter().map(move |&c| [d.clone(), vec![c]].concat())).collect();
    }
    let states: Vec<u64> = digits.iter().map(|d| basis.index_of(d)).collect();
    let pos: BTreeMap<u64, usize> = states.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let casimirs: Vec<_> = lat.sites().map(|s| vertex_casimir(lat, s, jmax)).collect();
    let n = states.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (c, &i) in states.iter().enumerate() {
        let e = StateVector::basis_state(basis, i);
        for a in &casimirs {
            for (r, x) in a.apply(&e).unwrap().entries() {
                m[(*pos.get(&r).expect("A_n preserves link spins"), c)] += x.re;
            }
        }
    }
    m.symmetric_eigenvalues().iter().filter(|e| e.abs() < 1e-9).count()
}

// ---- 12-j oracle -----------------------------------------------------------

fn fact(n: i32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Racah formula in plain floating point; arguments are twice the physical values.
fn cg_f64(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
    if m1 + m2 != m || j > j1 + j2 || j < (j1 - j2).abs() || (j1 + j2 + j) % 2 != 0 {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return 0.0;
    }
    let h = |t: i32| t / 2;
    let pre = (f64::from(j + 1) * fact(h(j1 + j2 - j)) * fact(h(j1 - j2 + j)) * fact(h(j2 - j1 + j)) / fact(h(j1 + j2 + j) + 1)).sqrt();
    let pre2 = (fact(h(j + m)) * fact(h(j - m)) * fact(h(j1 - m1)) * fact(h(j1 + m1)) * fact(h(j2 - m2)) * fact(h(j2 + m2))).sqrt();
    let mut s = 0.0;
    for k in 0..=40 {
        let a = [k, h(j1 + j2 - j) - k, h(j1 - m1) - k, h(j2 + m2) - k, h(j - j2 + m1) + k, h(j - j1 - m2) + k];
        if a.iter().any(|&x| x < 0) {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign / a.iter().map(|&x| fact(x)).product::<f64>();
    }
    pre * pre2 * s
}

fn sgn(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn site_oracle(j: [i32; 4], m: [i32; 4], j12: i32) -> f64 {
    let k: f64 = j.iter().map(|&x| f64::from(x + 1).powf(0.25)).product();
    let m12 = m[0] + m[1];
    if m[2] + m[3] != m12 {
        return 0.0;
    }
    let eta = sgn((j12 - m12) / 2) / f64::from(j12 + 1).sqrt();
    let phase = sgn(j[2] + j[3]) * sgn((j[2] - m[2]) / 2 + (j[3] - m[3]) / 2);
    k * phase * eta * cg_f64(j[0], m[0], j[1], m[1], j12, m12) * cg_f64(j[2], -m[2], j[3], -m[3], j12, -m12)
}

/// Flat sum over every magnetic assignment of the eight links.
fn twelve_j_oracle(label: &TwelveJLabel) -> f64 {
    let spins: Vec<i32> = label.links.iter().map(|s| s.twice()).collect();
    let j12: Vec<i32> = label.intertwiners.iter().map(|s| s.twice()).collect();
    let mut m = spins.iter().map(|&j| -j).collect::<Vec<_>>();
    let mut total = 0.0;
    'outer: loop {
        let mut prod = 1.0;
        for s in 0..4 {
            let legs = TORUS2_SITE_LEGS[s];
            prod *= site_oracle(legs.map(|l| spins[l]), legs.map(|l| m[l]), j12[s]);
            if prod == 0.0 {
                break;
            }
        }
        total += prod;
        let mut k = 0;
        loop {
            if k == 8 {
                break 'outer;
            }
            m[k] += 2;
            if m[k] <= spins[k] {
                break;
            }
            m[k] = -spins[k];
            k += 1;
        }
    }
    total
}

// ---- report lookups --------------------------------------------------------

fn matching<'a>(r: &'a VerificationReport, pattern: &str) -> Vec<&'a Check> {
    let found: Vec<_> = r.checks.iter().filter(|c| c.name.contains(pattern)).collect();
    assert!(!found.is_empty(), "{}: no check matching {pattern:?}", r.experiment);
    found
}

/// Every matching check passes its gate.
fn holds(r: &VerificationReport, pattern: &str) -> bool {
    matching(r, pattern).iter().all(|c| c.pass == Some(true))
}

fn probe_value(r: &VerificationReport, pattern: &str) -> f64 {
    let c = matching(r, pattern)[0];
    assert_eq!(c.gate, Gate::Probe);
    c.max_abs_error
}

struct Tally {
    asserted_failures: Vec<String>,
}

impl Tally {
    fn line(&mut self, n: u32, pass: bool, attainable: bool, summary: &str) {
        println!("criterion {n:>2}: {} — {summary}", if pass { "PASS" } else { "FAIL" });
        if !pass && attainable {
            self.asserted_failures.push(format!("criterion {n}"));
        }
    }
}

#[test]
fn acceptance_criteria() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::default();
    cfg.output_dir = out.path().to_path_buf();
    let mut tally = Tally { asserted_failures: Vec::new() };

    // 1. single-link algebra at jmax = 3/2
    let mut half = cfg.clone();
    half.jmax_twice = 1;
    let alg = algebra::verify_algebra(&half);
    let stated = holds(&alg, "(stated sign)");
    let rest = alg
        .checks
        .iter()
        .filter(|c| c.name.starts_with("link:") && c.gate != Gate::Probe && !c.name.contains("(stated sign)"))
        .all(|c| c.pass == Some(true));
    let link_runtime = probe_value(&alg, "link suite runtime");
    tally.line(
        1,
        stated && rest && link_runtime < 1.0,
        false,
        &format!("link identities other than the stated E+ closure hold: {rest}; E+ closure with +i eps: {stated}; runtime {link_runtime:.3} s"),
    );
    assert!(rest && link_runtime < 1.0, "criterion 1: attainable parts");

    // 2. commuting terms at L = 2, jmax = 1/2
    let ham = ["[A_n, A_n']", "[A_n, B_p]", "[A_n, W_gamma]", "[B_p, B_p']", "[W_gx, W_gy]"].iter().all(|p| holds(&alg, p));
    let ham_runtime = probe_value(&alg, "hamiltonian suite runtime");
    tally.line(2, ham && ham_runtime < 120.0, true, &format!("commutators vanish on 20 random / interior vectors; runtime {ham_runtime:.1} s"));

    // 3. spin-network count vs the kernel of sum_n A_n
    let lat = TorusLattice::new(2).unwrap();
    let mut lab = Lab::new(cfg.clone());
    let space = lab.space(HalfInt::HALF).unwrap();
    let kernel = gauss_kernel_dimension(&lat, HalfInt::HALF);
    let basis = space.basis().clone();
    let mut direct_ok = true;
    for mask in 0u32..256 {
        if mask.count_ones() > 4 {
            continue;
        }
        let cfg_spins: Vec<i32> = (0..8).map(|k| ((mask >> k) & 1) as i32).collect();
        let dk = direct_block_kernel(&lat, &basis, &cfg_spins);
        let per_site: usize = lat.sites().map(|s| singlets(lat.star_links(s).map(|(l, _)| cfg_spins[lat.link_index(l)]))).product();
        direct_ok &= dk == per_site;
    }
    let gs = ground::ground_state(&mut lab, Some(out.path()));
    let annihilated = holds(&gs, "spin networks: max_n |A_n v|");
    tally.line(
        3,
        space.dim() == kernel && direct_ok && annihilated,
        true,
        &format!("{} spin networks, kernel dimension {kernel}; direct block kernels agree: {direct_ok}; max_n |A_n v| <= 1e-10: {annihilated}", space.dim()),
    );

    // 4. 12-j amplitudes against the brute-force oracle
    let labels = TwelveJLabel::enumerate(HalfInt::ONE);
    let worst = labels.iter().map(|l| (twelve_j_second_kind(l) - twelve_j_oracle(l)).abs()).fold(0.0, f64::max);
    let contraction = holds(&gs, "12-j amplitudes agree");
    tally.line(4, worst <= 1e-10 && contraction, true, &format!("{} labels with spins <= 1, max deviation {worst:.2e}", labels.len()));

    // 5. ground states
    let sectors = holds(&gs, "sector states: max_n |A_n psi|")
        && holds(&gs, "trivial sector: <B_p> strictly decreases")
        && holds(&gs, "<W_gx> moves toward")
        && holds(&gs, "Gram determinant is positive");
    let det = matching(&gs, "Gram determinant is positive")[0].value.as_ref().map(|v| v["gram_determinant"].clone()).unwrap_or_default();
    tally.line(5, sectors, true, &format!("gauge invariance, <B_p> and <W_gx> trends; Gram determinants {det}"));

    // 6. electric quasiparticles
    let ex = excite::excite(&mut lab);
    let electric = holds(&ex, "3/4 Gamma psi0 at both endpoints") && holds(&ex, "away from the endpoints") && holds(&ex, "[B_p, Gamma_ab] = 0");
    tally.line(6, electric, true, "endpoint coefficient 3/4, silent elsewhere, [B_p, Gamma] = 0 below the cutoff");

    // 7. tier-1 vortex
    let vortex = holds(&ex, "end-plaquette case identities") && holds(&ex, "vortex: <B_p1> moves toward");
    let coefficient = probe_value(&ex, "tier-1 vortex: sum_p");
    tally.line(7, vortex, true, &format!("cases I and III exact; <B_p1> trends for pi/2, pi, 2pi; energy coefficient {coefficient:.4} (untruncated 2)"));

    // 8. Wilson-'t Hooft algebra
    let br = braid::braid(&mut lab);
    let algebra_ok = holds(&br, "enclosing loop: Sigma W Sigma^-1 = D W")
        && holds(&br, "enclosing loop: the rotation angle")
        && holds(&br, "loop enclosing neither vortex")
        && holds(&br, "loop deformation")
        && holds(&br, "same in all four sectors");
    tally.line(8, algebra_ok, true, "angle omega to 1e-8, c-number deviation and identity to 1e-10, invariant under loop and sector change");

    // 9. braiding overlap
    let braiding = holds(&br, "Tr M moves toward") && holds(&br, "|M - 1| decreases") && holds(&br, "braid followed by its reverse");
    tally.line(9, braiding, true, "Tr M approaches 2cos(omega/2), control approaches 1, omega then -omega is the identity");

    // 10. Dirac string
    let middle = matching(&br, "middle plaquette");
    let dirac = holds(&br, "gauge twirl: I_s v = v") && holds(&br, "string deformation") && middle.iter().all(|c| c.gate == Gate::Probe);
    tally.line(10, dirac, true, &format!("twirl and deformation exact; tier-2 middle-plaquette deviation {:.4} recorded", middle[0].max_abs_error));

    // 11. gap term
    let commutator = holds(&ex, "[dH, H] = 0 on random vectors");
    let remainder = holds(&ex, "minus its plaquette-plaquette commutator terms");
    let decreasing = holds(&ex, "|dH psi0| decreases");
    let measured = matching(&ex, "[dH, H] = 0 on random vectors")[0].max_abs_error;
    tally.line(
        11,
        commutator && decreasing,
        false,
        &format!("|[dH, H] v| = {measured:.2e} (remainder after truncated [B_p, B_p'] terms exact: {remainder}); |dH psi0| decreases: {decreasing}"),
    );
    assert!(remainder && decreasing, "criterion 11: attainable parts");

    // 12. probes archived in the consolidated report
    for r in [&alg, &gs, &ex, &br] {
        r.write(out.path()).unwrap();
    }
    let merged = consolidate(out.path()).unwrap();
    let probes: Vec<&Check> = merged.experiments.values().flat_map(|r| r.checks.iter()).filter(|c| c.gate == Gate::Probe).collect();
    let has = |p: &str| probes.iter().any(|c| c.name.contains(p) && c.pass.is_none());
    let archived = has("max_n |A_n Sigma psi0|") && has("Sigma^dag Sigma - 1") && merged.archived_runs.values().sum::<usize>() == 4;
    tally.line(12, archived, true, &format!("{} probes in the consolidated report, none gating", probes.len()));

    assert!(tally.asserted_failures.is_empty(), "failed: {:?}", tally.asserted_failures);
}
