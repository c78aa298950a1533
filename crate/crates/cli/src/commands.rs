use exceptional::chern::{euler_form, mu_h, slope_mu, vector_slope};
use exceptional::json::format_rational;
use exceptional::markov::{is_markov, markov_tree, pair_orbit, uniqueness_counterexample};
use exceptional::mutation::{
    apply_braid, basic_collection, check_helix_period, gram_matrix, helix_extend, is_numerically_exceptional,
    mutate_collection, Letter,
};
use exceptional::pairs::{classify_pair, difference_class, PairType};
use exceptional::pipeline::{normalize_and_descend, peel_curve};
use exceptional::stability::{hn_blocks, hn_coarsen};
use exceptional::{
    BraidWord, Collection, Direction, DivisorClass, GradedObject, KClass, MutationLog, Step, Surface,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{integer_list, load, write_file};
use crate::{Command, DescentArgs, Failure, PairArgs};

type Outcome = Result<Value, Failure>;

fn int(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse().expect("decimal integers are JSON numbers"))
}

fn ints(ns: &[BigInt]) -> Value {
    Value::Array(ns.iter().map(int).collect())
}

fn rational(q: &BigRational) -> Value {
    Value::String(format_rational(q))
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn surface(arg: &str) -> Result<Surface, Failure> {
    load("surface", arg)
}

fn class_on(s: &Surface, what: &str, arg: &str) -> Result<KClass, Failure> {
    let k: KClass = load(what, arg)?;
    s.check(k.c1())?;
    Ok(k)
}

fn ample(s: &Surface, arg: Option<&str>) -> Result<DivisorClass, Failure> {
    match arg {
        None => Ok(s.default_ample()),
        Some(a) => {
            let d: DivisorClass = load("ample class", a)?;
            s.check(&d)?;
            Ok(d)
        }
    }
}

fn mults(c: &Collection, arg: Option<&str>) -> Result<Vec<BigInt>, Failure> {
    match arg {
        None => Ok(vec![BigInt::from(1); c.len()]),
        Some(text) => integer_list("mults", text),
    }
}

fn write_log(out: Option<&str>, log: &MutationLog) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, &log.to_jsonl()),
        None => Ok(()),
    }
}

fn indexed(members: &[(i64, KClass)]) -> Value {
    Value::Array(
        members
            .iter()
            .map(|(i, k)| json!({"index": i, "class": value(k)}))
            .collect(),
    )
}

/// The collection fields followed by `extra`, so the document is also valid collection input.
fn collection_doc(c: &Collection, extra: Value) -> Value {
    let mut doc = value(c);
    if let (Value::Object(map), Value::Object(more)) = (&mut doc, extra) {
        map.extend(more);
    }
    doc
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Chi(p) => chi(&p),
        Command::Slope { surface, e, ample } => slope(&surface, &e, ample.as_deref()),
        Command::ClassifyPair(p) => classify(&p),
        Command::Roots { surface: s } => roots(&s),
        Command::Mutate { collection, pos, dir } => mutate(&collection, pos, dir),
        Command::Braid {
            collection,
            word,
            length,
            seed,
            out,
        } => braid(&collection, word.as_deref(), length, seed, out.as_deref()),
        Command::Helix { collection, lo, hi } => helix(&collection, lo, hi),
        Command::Gram { collection } => {
            let c: Collection = load("collection", &collection)?;
            let rows: Vec<Value> = gram_matrix(&c).iter().map(|r| ints(r)).collect();
            Ok(json!({"gram": rows}))
        }
        Command::Check { collection } => check(&collection),
        Command::Hn { surface, graded, ample } => hn(&surface, &graded, ample.as_deref()),
        Command::Markov { limit, braid } => match (limit, braid) {
            (_, Some(word)) => markov_braid(&word),
            (Some(limit), None) => Ok(markov_limit(limit)),
            (None, None) => Err(Failure::input("markov needs --limit or --braid")),
        },
        Command::Orbit { pair, limit } => orbit(&pair, limit),
        Command::Normalize(args) => normalize(&args),
        Command::Peel {
            collection,
            mults: m,
            e_index,
            out,
        } => peel(&collection, m.as_deref(), e_index, out.as_deref()),
        Command::Descend(args) => descend(&args),
        Command::Replay { log } => replay(&log),
    }
}

fn chi(p: &PairArgs) -> Outcome {
    let s = surface(&p.surface)?;
    let e = class_on(&s, "class --e", &p.e)?;
    let f = class_on(&s, "class --f", &p.f)?;
    Ok(json!({"chi": int(&euler_form(&s, &e, &f)?)}))
}

fn slope(s: &str, e: &str, a: Option<&str>) -> Outcome {
    let s = surface(s)?;
    let e = class_on(&s, "class --e", e)?;
    let a = ample(&s, a)?;
    let v = vector_slope(&s, &e, &a)?;
    let vector: Vec<Value> = v.components().iter().map(rational).collect();
    Ok(json!({
        "rank": int(e.rank()),
        "mu": rational(&mu_h(&s, &e)?),
        "mu_ample": rational(&slope_mu(&s, &e, &a)?),
        "vector": vector,
    }))
}

fn classify(p: &PairArgs) -> Outcome {
    let s = surface(&p.surface)?;
    let e = class_on(&s, "class --e", &p.e)?;
    let f = class_on(&s, "class --f", &p.f)?;
    let kind = classify_pair(&s, &e, &f)?;
    let c = difference_class(&e, &f);
    let mut evidence = json!({
        "certificate": "numerically exceptional",
        "chi_ef": int(&euler_form(&s, &e, &f)?),
        "chi_fe": int(&euler_form(&s, &f, &e)?),
        "mu_e": rational(&mu_h(&s, &e)?),
        "mu_f": rational(&mu_h(&s, &f)?),
    });
    if matches!(kind, PairType::Zero | PairType::Singular) {
        evidence["c_squared"] = int(&c.square());
        evidence["d_dot_c"] = int(&e.c1().dot(&c));
        evidence["effective_connected"] = json!(kind == PairType::Singular);
    }
    Ok(json!({
        "kind": kind.name(),
        "dims": ints(&kind.dims()),
        "C": value(&c),
        "evidence": evidence,
    }))
}

fn roots(s: &str) -> Outcome {
    let s = surface(s)?;
    let all: Vec<Value> = s.enumerate_roots().iter().map(value).collect();
    let effective: Vec<Value> = s.effective_roots().iter().map(value).collect();
    Ok(json!({"count": all.len(), "roots": all, "effective": effective}))
}

fn mutate(c: &str, pos: usize, dir: Direction) -> Outcome {
    let c: Collection = load("collection", c)?;
    Ok(value(&mutate_collection(&c, pos, dir)?))
}

fn random_word(rng: &mut StdRng, n: usize, length: usize) -> Result<BraidWord, Failure> {
    if n < 2 {
        return Err(Failure::input("random braid words need at least two members"));
    }
    let letters = (0..length)
        .map(|_| {
            let p = rng.gen_range(1..n);
            if rng.gen_bool(0.5) {
                Letter::left(p)
            } else {
                Letter::right(p)
            }
        })
        .collect();
    Ok(BraidWord::new(letters))
}

fn braid(c: &str, word: Option<&str>, length: Option<usize>, seed: u64, out: Option<&str>) -> Outcome {
    let c: Collection = load("collection", c)?;
    let word: BraidWord = match (word, length) {
        (Some(w), _) => w.parse()?,
        (None, Some(len)) => random_word(&mut StdRng::seed_from_u64(seed), c.len(), len)?,
        (None, None) => return Err(Failure::input("braid needs --word or --length")),
    };
    let (result, log) = apply_braid(&c, &word)?;
    write_log(out, &log)?;
    Ok(collection_doc(&result, json!({"word": word.to_string()})))
}

fn helix(c: &str, lo: Option<i64>, hi: Option<i64>) -> Outcome {
    let c: Collection = load("collection", c)?;
    let lo = lo.unwrap_or(1);
    let hi = hi.unwrap_or(lo + c.len() as i64 - 1);
    let members = helix_extend(&c, lo, hi)?;
    let period = check_helix_period(&c)?;
    let witness = match &period.witness {
        None => Value::Null,
        Some(w) => json!({
            "index": w.index,
            "expected": value(&w.expected),
            "found": w.found.as_ref().map(value),
            "reason": w.reason,
        }),
    };
    Ok(json!({"members": indexed(&members), "periodic": period.periodic, "witness": witness}))
}

fn check(c: &str) -> Outcome {
    let c: Collection = load("collection", c)?;
    let result = is_numerically_exceptional(&c);
    let violation = match result.violation {
        None => Value::Null,
        Some(v) => json!({
            "row": v.row,
            "col": v.col,
            "value": int(&v.value),
            "expected": int(&v.expected),
        }),
    };
    Ok(json!({"exceptional": result.exceptional, "violation": violation}))
}

fn hn(s: &str, g: &str, a: Option<&str>) -> Outcome {
    let s = surface(s)?;
    let g: GradedObject = load("graded object", g)?;
    for q in &g.quotients {
        s.check(q.class.c1())?;
    }
    let a = ample(&s, a)?;
    let blocks: Vec<Value> = hn_blocks(&s, &g, &a)?
        .into_iter()
        .map(|b| {
            let slope: Vec<Value> = b.slope.components().iter().map(rational).collect();
            json!({"start": b.range.start + 1, "end": b.range.end, "slope": slope})
        })
        .collect();
    let mut doc = value(&hn_coarsen(&s, &g, &a)?);
    doc["blocks"] = Value::Array(blocks);
    Ok(doc)
}

fn markov_limit(limit: u64) -> Value {
    let triples: Vec<Value> = markov_tree(limit).iter().map(|t| ints(&t.0)).collect();
    let counterexample = uniqueness_counterexample(limit).map(|m| int(&m));
    json!({
        "limit": limit,
        "count": triples.len(),
        "triples": triples,
        "uniqueness": {"verified_up_to": limit, "counterexample": counterexample},
    })
}

fn markov_braid(word: &str) -> Outcome {
    let word: BraidWord = word.parse()?;
    let plane = Surface::generic(0)?;
    let (c, _) = apply_braid(&basic_collection(&plane), &word)?;
    let ranks = c.ranks();
    let abs: [BigInt; 3] = [0, 1, 2].map(|i| ranks[i].magnitude().clone().into());
    Ok(json!({
        "word": word.to_string(),
        "ranks": ints(&ranks),
        "markov": is_markov(&abs),
        "collection": value(&c),
    }))
}

fn orbit(p: &PairArgs, n: usize) -> Outcome {
    let s = surface(&p.surface)?;
    let e0 = class_on(&s, "class --e", &p.e)?;
    let e1 = class_on(&s, "class --f", &p.f)?;
    let o = pair_orbit(&s, &e0, &e1, n)?;
    let members: Vec<(i64, KClass)> = o
        .indices()
        .map(|i| (i, o.get(i).expect("index in range").clone()))
        .collect();
    Ok(json!({"h": int(&o.h), "x": ints(&o.x), "classes": indexed(&members)}))
}

fn normalize(args: &DescentArgs) -> Outcome {
    let c: Collection = load("collection", &args.collection)?;
    let m = mults(&c, args.mults.as_deref())?;
    let d = normalize_and_descend(&c, &m)?;
    let log = MutationLog {
        steps: d
            .log
            .steps
            .into_iter()
            .filter(|s| !matches!(s, Step::Peel { .. } | Step::Descend { .. }))
            .collect(),
    };
    write_log(args.out.as_deref(), &log)?;
    Ok(collection_doc(
        &d.normalized,
        json!({"mults": ints(&d.mults), "steps": log.kinds()}),
    ))
}

fn peel(c: &str, m: Option<&str>, e_index: Option<usize>, out: Option<&str>) -> Outcome {
    let c: Collection = load("collection", c)?;
    let m = mults(&c, m)?;
    let e_index = e_index.unwrap_or(c.surface().blowups());
    let p = peel_curve(&c, &m, e_index)?;
    write_log(out, &p.log)?;
    Ok(json!({"e_index": e_index, "alpha": int(&p.alpha), "g": value(&p.g)}))
}

fn descend(args: &DescentArgs) -> Outcome {
    let c: Collection = load("collection", &args.collection)?;
    let m = mults(&c, args.mults.as_deref())?;
    let d = normalize_and_descend(&c, &m)?;
    write_log(args.out.as_deref(), &d.log)?;
    Ok(json!({
        "surface": value(&c.surface().blown_down()?),
        "descended": value(&d.descended),
        "peeled": value(&d.peeled),
        "alpha": int(&d.alpha),
        "mults": ints(&d.mults),
        "steps": d.log.kinds(),
    }))
}

fn replay(path: &str) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read log {path:?}: {e}")))?;
    let log = MutationLog::from_jsonl(&text)?;
    log.replay()?;
    Ok(json!({"replayed": true, "steps": log.kinds()}))
}
