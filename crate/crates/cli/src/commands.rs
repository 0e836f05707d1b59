//! The subcommands. Each returns a [`Report`]: free text, then `---`, then `key=value` lines.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use twistpair::grouprings::{strojnowski_check, unique_product_search, unique_products_free_abelian, unique_products_in_group, ProductInput, TwistedGroupRing};
use twistpair::pairs::{classify_pair, dagger_brute_force, enumerate_normalisers, lbh_by_definition, pair_from_twist, Mode};
use twistpair::reconstruct::filters::{ultrafilters_are_minimal_up_sets, MAX_FILTER_POSET};
use twistpair::reconstruct::{
    ahat_iso, algebra_iso_from_twist_iso, compare_twists, diagonal_preserving_iso_brute, verify_reconstruction_theorem,
    verify_twist_iso, UltraGroupoid,
};
use twistpair::twist::{check_twist_axioms, cocycle_from_section, restrict_to_fibre, twist_from_cocycle};
use twistpair::{Cocycle, Elem, Error, FiniteRing, Pair};

use crate::format::{write_twist, GroupSpec, InputDocument, ParseError};

/// Pairs with at most this many elements get the dagger oracle.
const DAGGER_ORACLE_LIMIT: u128 = 4096;

#[derive(Debug)]
pub enum CliError {
    Parse { path: String, error: ParseError },
    Io { path: String, error: std::io::Error },
    Core(Error),
    Usage(String),
}

impl CliError {
    /// 2 for a search over the cap, 3 for anything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::CapExceeded { .. }) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { path, error } => write!(f, "{path}: {error}"),
            CliError::Io { path, error } => write!(f, "{path}: {error}"),
            CliError::Core(e @ Error::CapExceeded { .. }) => write!(f, "{e}; raise it with --cap or `cap = n` under [options]"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Command output. `violations` are theorem failures, which exit with status 1.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub text: String,
    pub summary: Vec<(String, String)>,
    pub violations: Vec<String>,
}

impl Report {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn key(&mut self, k: &str, v: impl fmt::Display) {
        self.summary.push((k.to_string(), v.to_string()));
    }

    fn violation(&mut self, s: impl Into<String>) {
        let s = s.into();
        self.line(format!("VIOLATION: {s}"));
        self.violations.push(s);
    }

    pub fn render(&self) -> String {
        let mut out = self.text.clone();
        out.push_str("---\n");
        for (k, v) in &self.summary {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            1
        }
    }
}

/// Reads the `key=value` block after the last `---` line.
pub fn parse_summary(output: &str) -> Result<BTreeMap<String, String>, String> {
    let lines: Vec<&str> = output.lines().collect();
    let start = lines.iter().rposition(|l| *l == "---").ok_or("no `---` separator")?;
    let mut out = BTreeMap::new();
    for l in &lines[start + 1..] {
        let (k, v) = l.split_once('=').ok_or(format!("malformed summary line `{l}`"))?;
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(format!("duplicate summary key `{k}`"));
        }
    }
    Ok(out)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn optional(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "na",
    }
}

fn twist_of(doc: &InputDocument) -> CliResult<&Cocycle> {
    doc.twist.as_ref().ok_or_else(|| CliError::Usage("this command needs a [groupoid] or a finite [group]".into()))
}

fn pair_of(doc: &InputDocument) -> CliResult<Pair> {
    let cap = doc.options.cap;
    match (&doc.twist, &doc.algebra) {
        (Some(c), _) => Ok(pair_from_twist(c, cap)?),
        (None, Some(a)) => Ok(Pair::new(a.algebra.clone(), a.sub_basis.clone(), cap)?),
        (None, None) => Err(CliError::Usage("this command needs a [groupoid], a finite [group], or an [algebra] with a [pair]".into())),
    }
}

/// `1 + (a+1)*g`, with zero terms dropped.
fn format_combination(r: &FiniteRing, names: &[String], coeffs: &[Elem]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(names)
        .filter(|(&c, _)| c != r.zero())
        .map(|(&c, n)| {
            let l = r.label(c);
            if c == r.one() {
                n.clone()
            } else if l.contains(['+', ' ', '-']) {
                format!("({l})*{n}")
            } else {
                format!("{l}*{n}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn describe_ring(r: &FiniteRing) -> String {
    let mut props = Vec::new();
    if r.is_field() {
        props.push("field");
    } else {
        props.push(if r.is_reduced() { "reduced" } else { "not reduced" });
        props.push(if r.is_indecomposable() { "indecomposable" } else { "decomposable" });
    }
    format!("ring: {} ({} elements, {})", r.name(), r.size(), props.join(", "))
}

pub fn check(doc: &InputDocument) -> CliResult<Report> {
    let mut rep = Report::default();
    let r = &doc.ring;
    rep.line(describe_ring(r));
    rep.key("ring", r.name());
    rep.key("ring_size", r.size());
    rep.key("field", r.is_field());
    if let Some(c) = &doc.twist {
        let g = c.groupoid();
        let (principal, effective) = (g.is_principal(), g.is_effective());
        rep.line(format!(
            "groupoid: {} objects, {} arrows; {}principal, {}effective",
            g.num_objects(),
            g.num_arrows(),
            if principal { "" } else { "not " },
            if effective { "" } else { "not " }
        ));
        let nontrivial = g.composable_pairs().iter().filter(|&&(a, b, _)| c.value(a, b) != r.one()).count();
        rep.line(if nontrivial == 0 {
            "cocycle: trivial".to_string()
        } else {
            format!("cocycle: {nontrivial} composable pairs with value other than 1")
        });
        let t = twist_from_cocycle(c)?;
        let axioms = check_twist_axioms(&t);
        match &axioms {
            Ok(()) => rep.line(format!("twist: {} points over {} arrows, axioms hold", t.total.num_arrows(), g.num_arrows())),
            Err(v) => rep.violation(format!("twist axioms fail: {v}")),
        }
        if principal != effective {
            rep.violation("a finite discrete groupoid is principal exactly when it is effective");
        }
        rep.key("objects", g.num_objects());
        rep.key("arrows", g.num_arrows());
        rep.key("principal", principal);
        rep.key("effective", effective);
        rep.key("cocycle_trivial", nontrivial == 0);
        rep.key("twist_points", t.total.num_arrows());
        rep.key("twist_axioms", axioms.is_ok());
        if doc.options.oracle {
            let back = cocycle_from_section(&t, &t.canonical_section())?;
            let agree = g.composable_pairs().iter().all(|&(a, b, _)| back.value(a, b) == c.value(a, b));
            rep.line(format!("oracle: cocycle read back from the twist {}", if agree { "matches" } else { "differs" }));
            if !agree {
                rep.violation("the canonical section does not recover the input cocycle");
            }
            rep.key("oracle", agree);
        }
    }
    if doc.twist.is_some() || doc.algebra.is_some() {
        let p = pair_of(doc)?;
        rep.line(format!(
            "algebra: dimension {}; B has {} elements, {} idempotents, {} atoms",
            p.algebra().dim(),
            p.b_elements().len(),
            p.idempotents().len(),
            p.atoms().len()
        ));
        rep.key("algebra_dim", p.algebra().dim());
        rep.key("b_size", p.b_elements().len());
        rep.key("atoms", p.atoms().len());
    }
    Ok(rep)
}

pub fn classify(doc: &InputDocument) -> CliResult<Report> {
    let mut rep = Report::default();
    let p = pair_of(doc)?;
    let c = classify_pair(&p)?;
    let ce = match c.faithful_ce_exists {
        Some(true) => "true",
        Some(false) => "false",
        None => "unknown",
    };
    let rows: [(&str, &str, String); 11] = [
        ("wt", "weakly torsion free", c.wt.to_string()),
        ("local_units", "idempotents of B are local units", c.local_units.to_string()),
        ("b_spanned_by_idempotents", "B spanned by its idempotents", c.b_spanned_by_idempotents.to_string()),
        ("a_spanned_by_normalisers", "A spanned by normalisers", c.a_spanned_by_normalisers.to_string()),
        ("faithful_ce_exists", "faithful conditional expectation exists", ce.to_string()),
        ("b_maximal_commutative", "B maximal commutative", c.b_maximal_commutative.to_string()),
        ("a_spanned_by_free_normalisers", "A spanned by free normalisers", c.a_spanned_by_free_normalisers.to_string()),
        ("canonical_ce", "canonical expectation is a conditional expectation", c.canonical_ce.to_string()),
        ("adp", "algebraic diagonal pair", c.adp.to_string()),
        ("acp", "algebraic Cartan pair", c.acp.to_string()),
        ("aqp", "algebraic quasi-Cartan pair", c.aqp.to_string()),
    ];
    for (key, label, value) in rows {
        rep.line(format!("{label}: {value}"));
        rep.key(key, value);
    }
    for w in &c.warnings {
        rep.line(format!("warning: {w}"));
    }
    if let Some(tw) = &doc.twist {
        let g = tw.groupoid();
        rep.line(format!("groupoid: principal {}, effective {}", g.is_principal(), g.is_effective()));
        rep.key("principal", g.is_principal());
        rep.key("effective", g.is_effective());
        if c.aqp && c.adp != g.is_principal() {
            rep.violation("a quasi-Cartan Steinberg pair is diagonal exactly when the groupoid is principal");
        }
        if c.aqp && c.acp != g.is_effective() {
            rep.violation("a quasi-Cartan Steinberg pair is Cartan exactly when the groupoid is effective");
        }
    }
    if doc.options.oracle {
        oracle_classify(doc, &p, &mut rep)?;
    }
    Ok(rep)
}

fn oracle_classify(doc: &InputDocument, p: &Pair, rep: &mut Report) -> CliResult<()> {
    let mut checks = 0;
    let minimal = enumerate_normalisers(p, Mode::Minimal)?;
    if p.weakly_torsion_free() && minimal.len() <= MAX_FILTER_POSET {
        match ultrafilters_are_minimal_up_sets(p) {
            Ok(true) => checks += 1,
            Ok(false) => rep.violation("a maximal filter of N(B) is not the up-set of a minimal normaliser"),
            Err(Error::CapExceeded { .. }) => rep.line("oracle: normaliser poset too large for the filter search"),
            Err(e) => return Err(e.into()),
        }
    }
    if p.algebra().size() <= DAGGER_ORACLE_LIMIT {
        for n in minimal.iter().take(32) {
            let found = dagger_brute_force(p, &n.n)?;
            if found != vec![n.dagger.clone()] {
                rep.violation(format!("dagger of {} differs from the brute-force search", p.algebra().format(&n.n)));
            }
            checks += 1;
        }
    }
    if let Some(c) = &doc.twist {
        let by_def = lbh_by_definition(c, doc.options.cap)?;
        let by_units = twistpair::pairs::check_lbh(c, doc.options.cap)?.holds;
        if by_def != by_units {
            rep.violation("the local bisection hypothesis differs between the definition and the unit count");
        }
        checks += 1;
    }
    rep.line(format!("oracle: {checks} independent checks run"));
    rep.key("oracle_checks", checks);
    Ok(())
}

pub fn reconstruct(doc: &InputDocument) -> CliResult<Report> {
    let mut rep = Report::default();
    let cap = doc.options.cap;
    let p = pair_of(doc)?;
    let aqp = classify_pair(&p)?.aqp;
    if let Some(c) = &doc.twist {
        let r = verify_reconstruction_theorem(c, cap)?;
        let phi = &r.phi;
        let image: HashSet<usize> = phi.map.iter().flatten().copied().collect();
        rep.line(format!("Σ: {} points over {} arrows", r.sigma_points, c.groupoid().num_arrows()));
        rep.line(format!("Σ′: {} points over {} classes", r.rebuilt_points, r.rebuilt_classes));
        rep.line(format!(
            "Φ {}, {} ({} of {} points); pair is {}quasi-Cartan",
            if phi.injective { "injective" } else { "not injective" },
            if phi.surjective { "surjective" } else { "not surjective" },
            image.len(),
            r.rebuilt_points,
            if r.aqp { "" } else { "not " }
        ));
        match &r.lbh.witness {
            None => rep.line("local bisection hypothesis: holds"),
            Some((x, u)) => {
                let names = c.groupoid().arrow_names();
                rep.line(format!(
                    "local bisection hypothesis: fails (nontrivial unit {} at object {})",
                    format_combination(c.ring(), names, u),
                    c.groupoid().object_name(*x)
                ));
            }
        }
        rep.line(format!("quasi-Cartan, hypothesis and surjectivity agree: {}", yes(r.equivalence_holds)));
        if !r.equivalence_holds {
            rep.violation("quasi-Cartan, the local bisection hypothesis and surjectivity of Φ disagree");
        }
        if !(phi.injective && phi.homomorphism && phi.equivariant && phi.unit_bijection) {
            rep.violation("Φ is not an injective equivariant homomorphism matching units");
        }
        if let Some(d) = r.diagram_commutes {
            rep.line(format!("Φ is an isomorphism of twists: {}", yes(d)));
            if !d {
                rep.violation("Φ is onto but not an isomorphism of twists");
            }
        }
        rep.key("sigma_points", r.sigma_points);
        rep.key("phi_injective", phi.injective);
        rep.key("phi_surjective", phi.surjective);
        rep.key("phi_image", image.len());
        rep.key("lbh", r.lbh.holds);
        rep.key("equivalence", r.equivalence_holds);
        rep.key("diagram_commutes", optional(r.diagram_commutes));
        if doc.options.oracle {
            let ug = UltraGroupoid::build(&p)?;
            let iso = compare_twists(&twist_from_cocycle(c)?, &ug.twist, cap)?.is_some();
            rep.line(format!("oracle: independent twist comparison finds Σ ≅ Σ′: {}", yes(iso)));
            if iso != r.phi.surjective {
                rep.violation("the twist comparison disagrees with Φ");
            }
            rep.key("oracle_isomorphic", iso);
        }
    }
    let ug = UltraGroupoid::build(&p)?;
    rep.key("sigma_prime_points", ug.num_points());
    rep.key("g_prime_classes", ug.num_classes());
    rep.key("aqp", aqp);
    if aqp {
        let a = ahat_iso(&p)?;
        let mode = if a.exhaustive { "checked on every element" } else { "checked on basis products" };
        rep.line(format!("â: A → A_R(G′;Σ′) is a diagonal-preserving isomorphism: {} ({mode})", yes(a.all_hold())));
        if !a.all_hold() {
            rep.violation("â is not a diagonal-preserving algebra isomorphism");
        }
        rep.key("ahat_isomorphism", a.all_hold());
    } else {
        rep.line("â: not applicable, the pair is not quasi-Cartan");
        rep.key("ahat_isomorphism", "na");
    }
    let rebuilt = cocycle_from_section(&ug.twist, &ug.twist.canonical_section())?;
    rep.line("rebuilt twist:");
    rep.text.push_str(&write_twist(&rebuilt));
    Ok(rep)
}

pub fn units(doc: &InputDocument) -> CliResult<Report> {
    let mut rep = Report::default();
    let c = twist_of(doc)?;
    let g = c.groupoid();
    let (mut total, mut nontrivial, mut pairwise_total) = (0, 0, 0);
    for x in 0..g.num_objects() {
        let fibre = restrict_to_fibre(c, x);
        let ring = TwistedGroupRing::new(fibre.group.clone(), fibre.cocycle.clone())?;
        let u = ring.enumerate_units(doc.options.cap)?;
        let head = format!("{} units, {} nontrivial", u.total(), u.nontrivial.len());
        if g.num_objects() == 1 {
            rep.line(head);
        } else {
            rep.line(format!("object {}: {head}", g.object_name(x)));
        }
        for n in u.nontrivial.iter().take(24) {
            rep.line(format!("  {}", format_combination(c.ring(), fibre.group.names(), n)));
        }
        if u.nontrivial.len() > 24 {
            rep.line(format!("  ... {} more", u.nontrivial.len() - 24));
        }
        total += u.total();
        nontrivial += u.nontrivial.len();
        if doc.options.oracle {
            pairwise_total += ring.enumerate_units_pairwise(doc.options.cap)?.len();
        }
    }
    rep.key("units", total);
    rep.key("nontrivial_units", nontrivial);
    rep.key("trivial_units", total - nontrivial);
    if doc.options.oracle {
        rep.line(format!("oracle: pairwise product search finds {pairwise_total} units"));
        if pairwise_total != total {
            rep.violation("the two unit enumerations disagree");
        }
        rep.key("oracle_units", pairwise_total);
    }
    Ok(rep)
}

fn parse_tuple(s: &str, k: usize) -> CliResult<Vec<i64>> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let v: Vec<i64> = inner
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("`{s}` is not an integer tuple")))?;
    if v.len() != k {
        return Err(CliError::Usage(format!("`{s}` should have {k} coordinates")));
    }
    Ok(v)
}

pub fn upp(doc: &InputDocument) -> CliResult<Report> {
    let mut rep = Report::default();
    let group = doc.group.as_ref().ok_or_else(|| CliError::Usage("upp needs a [group] section".into()))?;
    let sets = doc.elements.as_ref().ok_or_else(|| CliError::Usage("upp needs an [elements] section with `a = ...` and `b = ...`".into()))?;
    if sets.a.is_empty() || sets.b.is_empty() {
        return Err(CliError::Usage("both `a` and `b` must be nonempty".into()));
    }
    let (witness, two, brute_count) = match group {
        GroupSpec::Finite(h) => {
            let look = |names: &[String]| -> CliResult<Vec<usize>> {
                names
                    .iter()
                    .map(|n| h.index_of(n).ok_or_else(|| CliError::Usage(format!("`{n}` is not an element of the group"))))
                    .collect()
            };
            let (a, b) = (look(&sets.a)?, look(&sets.b)?);
            let input = ProductInput::Finite { group: h, a: &a, b: &b };
            (unique_product_search(&input), strojnowski_check(&input), unique_products_in_group(h, &a, &b).len())
        }
        GroupSpec::FreeAbelian(k) => {
            let a = sets.a.iter().map(|s| parse_tuple(s, *k)).collect::<CliResult<Vec<_>>>()?;
            let b = sets.b.iter().map(|s| parse_tuple(s, *k)).collect::<CliResult<Vec<_>>>()?;
            let input = ProductInput::FreeAbelian { a: &a, b: &b };
            (unique_product_search(&input), strojnowski_check(&input), unique_products_free_abelian(&a, &b).len())
        }
    };
    match &witness {
        Some(w) => rep.line(format!("unique product: {w}")),
        None => rep.line("no element of AB has a unique factorisation"),
    }
    match two {
        Some(t) => rep.line(format!("two distinct unique products: {}", yes(t))),
        None => rep.line("two distinct unique products: not applicable, |A| + |B| <= 2"),
    }
    rep.key("unique_product", witness.is_some());
    rep.key("witness", witness.as_deref().unwrap_or("none"));
    rep.key("two_unique_products", optional(two));
    if doc.options.oracle {
        rep.line(format!("oracle: {brute_count} elements of AB counted with one factorisation"));
        if (brute_count > 0) != witness.is_some() || two.is_some_and(|t| t != (brute_count >= 2)) {
            rep.violation("the factorisation count disagrees with the search");
        }
        rep.key("oracle_unique_products", brute_count);
    }
    Ok(rep)
}

pub fn compare(first: &InputDocument, second: &InputDocument) -> CliResult<Report> {
    let mut rep = Report::default();
    let (c1, c2) = (twist_of(first)?, twist_of(second)?);
    let cap = first.options.cap.min(second.options.cap);
    if c1.ring().name() != c2.ring().name() {
        rep.line(format!("not isomorphic: twists over different rings {} and {}", c1.ring().name(), c2.ring().name()));
        rep.key("isomorphic", false);
        return Ok(rep);
    }
    let (t1, t2) = (twist_from_cocycle(c1)?, twist_from_cocycle(c2)?);
    let iso = compare_twists(&t1, &t2, cap)?;
    match &iso {
        None => rep.line("not isomorphic"),
        Some(iso) => {
            let (g1, g2) = (c1.groupoid(), c2.groupoid());
            rep.line("isomorphic");
            for (x, &y) in iso.object_map.iter().enumerate() {
                rep.line(format!("  object {} -> {}", g1.object_name(x), g2.object_name(y)));
            }
            for (a, &b) in iso.arrow_map.iter().enumerate() {
                let s = c1.ring().label(iso.scalars[a]);
                rep.line(format!("  arrow {} -> {} (scalar {s})", g1.arrow_name(a), g2.arrow_name(b)));
            }
            if !verify_twist_iso(&t1, &t2, iso) {
                rep.violation("the twist map fails verification");
            }
            let alg = algebra_iso_from_twist_iso(&t1, &t2, iso)?;
            rep.line(format!("induced algebra map is a diagonal-preserving isomorphism: {}", yes(alg.all_hold())));
            if !alg.all_hold() {
                rep.violation("isomorphic twists must give isomorphic pairs");
            }
            rep.key("algebra_isomorphism", alg.all_hold());
        }
    }
    rep.key("isomorphic", iso.is_some());
    if first.options.oracle || second.options.oracle {
        let (p1, p2) = (pair_from_twist(c1, cap)?, pair_from_twist(c2, cap)?);
        let brute = diagonal_preserving_iso_brute(&p1, &p2, cap)?.is_some();
        let both_aqp = classify_pair(&p1)?.aqp && classify_pair(&p2)?.aqp;
        rep.line(format!("oracle: basis search finds a diagonal-preserving algebra isomorphism: {}", yes(brute)));
        if (iso.is_some() && !brute) || (both_aqp && iso.is_some() != brute) {
            rep.violation("the basis search disagrees with the twist comparison");
        }
        rep.key("oracle_algebra_isomorphism", brute);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_input;

    fn run(text: &str, f: fn(&InputDocument) -> CliResult<Report>) -> Report {
        f(&parse_input(text).unwrap()).unwrap()
    }

    #[test]
    fn summary_round_trip() {
        let rep = run("ring = gf(2,1)\n[algebra]\nmatrix(2)\n[pair]\nsub_basis = E11, E22\n", classify);
        let parsed = parse_summary(&rep.render()).unwrap();
        assert_eq!(parsed.len(), rep.summary.len());
        for (k, v) in &rep.summary {
            assert_eq!(&parsed[k], v);
        }
        assert!(parse_summary("no separator").is_err());
        assert!(parse_summary("---\nbroken").is_err());
    }

    #[test]
    fn combination_format() {
        let r = twistpair::finring::make_gf(2, 2, None).unwrap();
        let names = vec!["e".to_string(), "g".to_string()];
        assert_eq!(format_combination(&r, &names, &[1, 0]), "e");
        let a1 = r.parse_elem("a+1").unwrap();
        assert_eq!(format_combination(&r, &names, &[1, a1]), "e + (a+1)*g");
        assert_eq!(format_combination(&r, &names, &[0, 0]), "0");
    }

    #[test]
    fn cap_maps_to_exit_two() {
        let doc = parse_input("ring = gf(5,1)\n[groupoid]\nfull_relation(3)\n[options]\ncap = 10\n").unwrap();
        let e = classify(&doc).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
