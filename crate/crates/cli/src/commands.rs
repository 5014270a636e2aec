use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use umps_core::ch_relations::{
    binary_kernel_check, certify_nontrivial, ch_extend, corollary_relation, example_d8_relation, example_relation,
    generate_ch_relation, remark_relation, substitute_relation, verify_relation_modular, verify_relation_symbolic,
    w3_relation, Ambient, Assignment, LinearRelation, VerificationMode,
};
use umps_core::combinatorics::{
    count_bracelets, count_bracelets_weight_binary, count_necklaces, count_necklaces_weight, enumerate_bracelets,
    enumerate_necklaces, Weight, Word,
};
use umps_core::exact_algebra::RankMode;
use umps_core::span_character::{Character, ConjectureRow, GeneratorSource, SpanEngine, SpanRequest};
use umps_core::trace_param::{GRADING, ONES};

use crate::args::{AmbientArg, Check, Kind, Preset, RelationArgs, Source};

/// Output of one subcommand in every supported format.
pub struct Report {
    pub text: String,
    pub csv: String,
    pub json: Value,
    /// All checks requested by the command passed.
    pub ok: bool,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn parse_weight(n: usize, d: usize, w: &str) -> Result<Weight> {
    let weight = if w.contains(',') {
        Weight(
            w.split(',')
                .map(|x| x.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .context("bad weight vector")?,
        )
    } else {
        if n != 2 {
            bail!("a scalar weight needs n = 2; pass a comma-separated vector");
        }
        let ones: usize = w.parse().context("bad weight")?;
        if ones > d {
            bail!("weight {ones} exceeds d = {d}");
        }
        Weight::binary(d, ones)
    };
    weight.check(n, d)?;
    Ok(weight)
}

fn enumeration_fits(n: usize, d: usize) -> bool {
    (n as f64).powi(d as i32) <= (1u64 << 22) as f64
}

pub fn count(n: usize, d: usize, w: Option<&str>) -> Result<Report> {
    if n == 0 || d == 0 {
        bail!("need n, d >= 1");
    }
    let weight = w.map(|w| parse_weight(n, d, w)).transpose()?;
    let (necklaces, bracelets) = match &weight {
        None => (Some(count_necklaces(n, d)), Some(count_bracelets(n, d))),
        Some(wt) => {
            let b = if n == 2 {
                Some(count_bracelets_weight_binary(d, wt.0[1])?)
            } else {
                None
            };
            (Some(count_necklaces_weight(n, d, wt)?), b)
        }
    };
    let checked = n <= 10 && enumeration_fits(n, d);
    let mut agree = true;
    let mut bracelets = bracelets;
    if checked {
        let en = enumerate_necklaces(n, d, weight.as_ref())?.len() as u128;
        let eb = enumerate_bracelets(n, d, weight.as_ref())?.len() as u128;
        agree = necklaces == Some(en) && bracelets.is_none_or(|b| b == eb);
        bracelets.get_or_insert(eb);
    }
    let show = |x: Option<u128>| x.map_or("-".to_string(), |x| x.to_string());
    let mut text = format!("necklaces {}\nbracelets {}\n", show(necklaces), show(bracelets));
    let mut csv = String::from("w,necklaces,bracelets\n");
    let mut per_weight = Vec::new();
    if n == 2 && weight.is_none() {
        for ones in 0..=d {
            let wt = Weight::binary(d, ones);
            let nk = count_necklaces_weight(2, d, &wt)?;
            let br = count_bracelets_weight_binary(d, ones)?;
            text.push_str(&format!("w={ones}: necklaces {nk}, bracelets {br}\n"));
            csv.push_str(&format!("{ones},{nk},{br}\n"));
            per_weight.push(json!({"w": ones, "necklaces": nk.to_string(), "bracelets": br.to_string()}));
        }
    }
    let label = weight.as_ref().map_or("total".to_string(), |w| join(&w.0, ";"));
    csv.push_str(&format!("{label},{},{}\n", show(necklaces), show(bracelets)));
    text.push_str(&format!(
        "enumeration check: {}\n",
        if checked {
            if agree {
                "ok"
            } else {
                "MISMATCH"
            }
        } else {
            "skipped"
        }
    ));
    let json = json!({
        "params": {"n": n, "d": d, "w": weight.as_ref().map(|w| w.0.clone())},
        "necklaces": necklaces.map(|x| x.to_string()),
        "bracelets": bracelets.map(|x| x.to_string()),
        "per_weight": per_weight,
        "enumeration_checked": checked,
        "enumeration_agrees": agree,
    });
    Ok(Report {
        text,
        csv,
        json,
        ok: agree,
    })
}

pub fn enumerate(n: usize, d: usize, w: Option<&str>, kind: Kind) -> Result<Report> {
    let weight = w.map(|w| parse_weight(n, d, w)).transpose()?;
    if !enumeration_fits(n, d) {
        bail!(umps_core::Error::ResourceCap {
            what: "n^d words",
            size: (n as u128).saturating_pow(d as u32),
            cap: 1 << 22
        });
    }
    let words: Vec<String> = match kind {
        Kind::Necklace => enumerate_necklaces(n, d, weight.as_ref())?
            .iter()
            .map(|x| x.to_string())
            .collect(),
        Kind::Bracelet => enumerate_bracelets(n, d, weight.as_ref())?
            .iter()
            .map(|x| x.to_string())
            .collect(),
    };
    let mut text = words.join("\n");
    text.push('\n');
    let csv = format!("word\n{text}");
    let json = json!({
        "params": {"n": n, "d": d, "w": weight.as_ref().map(|w| w.0.clone()), "kind": format!("{kind:?}").to_lowercase()},
        "count": words.len(),
        "words": words,
    });
    Ok(Report {
        text,
        csv,
        json,
        ok: true,
    })
}

fn character_json(ch: &Character) -> Value {
    let mut v = serde_json::to_value(ch).expect("character serializes");
    v["total"] = json!(ch.total());
    v["ambient_total"] = json!(ch.ambient_total());
    if ch.n == 2 {
        v["table_row"] = json!(ch.table_row());
    }
    v
}

#[allow(clippy::too_many_arguments)]
pub fn character(
    engine: &SpanEngine,
    mode: RankMode,
    m: usize,
    n: usize,
    d: usize,
    source: Option<Source>,
    all_weights: bool,
    max_weight: Option<usize>,
) -> Result<Report> {
    let binary = m == 2 && n == 2;
    let source = match source {
        Some(Source::Generic) => GeneratorSource::Generic,
        Some(Source::TraceParam) => GeneratorSource::TraceParam,
        None if binary => GeneratorSource::TraceParam,
        None => GeneratorSource::Generic,
    };
    let params = json!({"m": m, "n": n, "d": d, "source": source, "max_weight": max_weight});
    if let Some(mw) = max_weight.filter(|&mw| mw < d / 2) {
        if n != 2 {
            bail!("--max-weight needs n = 2");
        }
        let mut dims = Vec::new();
        for w in 0..=mw {
            let req = SpanRequest {
                m,
                n,
                d,
                weight: Weight::binary(d, w),
                source,
                mode,
            };
            dims.push(engine.span_dimension_weight(&req)?);
        }
        let header: Vec<String> = (0..=mw).map(|w| format!("D_{w}")).collect();
        return Ok(Report {
            text: format!("{}\n", join(&dims, ",")),
            csv: format!("d,{}\n{d},{}\n", header.join(","), join(&dims, ",")),
            json: json!({"params": params, "mode": mode, "dims": dims}),
            ok: true,
        });
    }
    let ch = engine.character_of_span(m, n, d, source, mode)?;
    let mut text = String::new();
    let mut csv = String::new();
    if n == 2 && !all_weights {
        text.push_str(&format!(
            "{} | total {} | ambient {}\n",
            join(&ch.table_row(), ","),
            ch.total(),
            ch.ambient_total()
        ));
        csv.push_str(&format!("{}\n{}\n", ch.csv_header(), ch.to_csv_row()));
    } else {
        csv.push_str("weight,dim,ambient\n");
        for (w, dim) in &ch.dims {
            let label = if n == 2 {
                w.0[1].to_string()
            } else {
                format!("({})", join(&w.0, ","))
            };
            text.push_str(&format!("w={label}: {dim} / {}\n", ch.ambient[w]));
            csv.push_str(&format!("{},{dim},{}\n", join(&w.0, ";"), ch.ambient[w]));
        }
        text.push_str(&format!("total {} | ambient {}\n", ch.total(), ch.ambient_total()));
    }
    Ok(Report {
        text,
        csv,
        json: json!({"params": params, "mode": mode, "character": character_json(&ch)}),
        ok: true,
    })
}

pub fn ideal(engine: &SpanEngine, mode: RankMode, d: usize, k: usize, max_weight: Option<usize>) -> Result<Report> {
    let params = json!({"d": d, "k": k, "max_weight": max_weight});
    if let Some(mw) = max_weight.filter(|&mw| mw < k * d / 2) {
        let rows: Vec<_> = (3..=mw)
            .map(|w| engine.ideal_character_degree_k(d, k, w, mode))
            .collect::<umps_core::Result<_>>()?;
        let dims: Vec<usize> = rows.iter().map(|r| r.dim).collect();
        let header: Vec<String> = (3..=mw).map(|w| format!("D_{w}")).collect();
        return Ok(Report {
            text: format!("{}\n", join(&dims, ",")),
            csv: format!("d,{}\n{d},{}\n", header.join(","), join(&dims, ",")),
            json: json!({"params": params, "mode": mode, "weights": rows}),
            ok: true,
        });
    }
    let ch = engine.ideal_character(d, k, mode)?;
    Ok(Report {
        text: format!("{}\n", join(&ch.table_row(), ",")),
        csv: format!("{}\n{}\n", ch.csv_header(), ch.to_csv_row()),
        json: json!({"params": params, "mode": mode, "character": character_json(&ch)}),
        ok: true,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn verify_ch(
    engine: &SpanEngine,
    m: usize,
    ell: usize,
    example: bool,
    check: Option<Check>,
    trials: usize,
    seed: u64,
    perturb: Option<usize>,
) -> Result<Report> {
    let perturbed = |r: umps_core::ch_relations::TraceRelation| -> Result<_> {
        match perturb {
            Some(i) if i >= r.len() => bail!("--perturb {i} out of range ({} terms)", r.len()),
            Some(i) => Ok(r.perturbed(i)),
            None => Ok(r),
        }
    };
    let params = json!({"m": m, "ell": ell, "example": example, "trials": trials, "seed": seed, "perturb": perturb});
    if example {
        let rel = perturbed(example_relation())?;
        let cert = ch_extend(&rel, m, engine.exec)?;
        let how = mode_label(cert.mode);
        let mut text = format!(
            "relation: {} = 0\nterms: {}\nverified k: {}\n",
            rel.pretty(),
            rel.len(),
            if cert.verified_k.is_empty() {
                "none".to_string()
            } else {
                join(&cert.verified_k, ",")
            }
        );
        match cert.failing_k {
            Some(k) => text.push_str(&format!("certified for all k: no (fails at k = {k}, {how})\n")),
            None => text.push_str(&format!("certified for all k: yes ({how})\n")),
        }
        let csv = format!(
            "m,terms,verified_k,failing_k,certified\n{m},{},{},{},{}\n",
            rel.len(),
            join(&cert.verified_k, ";"),
            cert.failing_k.map_or(String::new(), |k| k.to_string()),
            yes(cert.identically_zero)
        );
        return Ok(Report {
            text,
            csv,
            json: json!({"params": params, "certificate": cert.to_json()}),
            ok: cert.identically_zero,
        });
    }
    let rel = perturbed(generate_ch_relation(m, ell)?)?;
    let check = check.unwrap_or(if m <= 2 { Check::Symbolic } else { Check::Randomized });
    let cert = match check {
        Check::Symbolic => verify_relation_symbolic(&rel, m, &Assignment::Generic, engine.exec)?,
        Check::Randomized => verify_relation_modular(&rel, m, &Assignment::Generic, trials, seed)?,
    };
    let how = match &cert.modular {
        Some(t) => format!("randomized, {} trials mod {}", t.trials, t.prime),
        None => "symbolic".to_string(),
    };
    let text = format!(
        "terms: {}\nidentically zero: {} ({how})\n",
        rel.len(),
        yes(cert.identically_zero)
    );
    let csv = format!(
        "m,ell,terms,identically_zero,certificate\n{m},{ell},{},{},{}\n",
        rel.len(),
        yes(cert.identically_zero),
        mode_label(cert.mode)
    );
    Ok(Report {
        text,
        csv,
        json: json!({"params": params, "certificate": cert.to_json()}),
        ok: cert.identically_zero,
    })
}

fn mode_label(m: VerificationMode) -> &'static str {
    match m {
        VerificationMode::Symbolic => "symbolic",
        VerificationMode::RandomizedNumeric => "randomized-numeric",
    }
}

struct Built {
    rel: LinearRelation,
    m: usize,
    label: String,
}

fn build_relation(a: &RelationArgs) -> Result<Built> {
    let preset = match (a.preset, &a.map) {
        (Some(p), None) => Some(p),
        (None, None) => Some(Preset::ExampleD8),
        (None, Some(_)) => None,
        (Some(_), Some(_)) => bail!("--preset and --map are exclusive"),
    };
    let m = a.m.unwrap_or(2);
    Ok(match preset {
        Some(Preset::ExampleD8) => Built {
            rel: example_d8_relation()?,
            m: 2,
            label: "example-d8".into(),
        },
        Some(Preset::Corollary) => {
            let ell = a.ell.unwrap_or(m);
            Built {
                rel: corollary_relation(m, ell)?,
                m,
                label: format!("corollary m={m} ell={ell}"),
            }
        }
        Some(Preset::Remark) => Built {
            rel: remark_relation(m)?,
            m,
            label: format!("remark m={m}"),
        },
        Some(Preset::W3) => {
            let (Some(x), Some(y), Some(z)) = (a.a, a.b, a.c) else {
                bail!("the w3 preset needs --a, --b and --c")
            };
            Built {
                rel: w3_relation(x, y, z)?,
                m: 2,
                label: format!("w3 a={x} b={y} c={z}"),
            }
        }
        None => {
            let ell = a.ell.context("--map needs --ell")?;
            let n = a.n.context("--map needs --n")?;
            let words: Vec<Word> = a
                .map
                .as_ref()
                .unwrap()
                .iter()
                .map(|s| s.parse())
                .collect::<umps_core::Result<_>>()?;
            let rel = substitute_relation(&generate_ch_relation(m, ell)?, &words, n)?;
            Built {
                rel,
                m,
                label: format!("m={m} ell={ell} map={}", join(&words, ",")),
            }
        }
    })
}

fn relation_json(rel: &LinearRelation, ambient: Ambient) -> Value {
    json!({
        "coeffs": rel.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "words": rel.words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "ambient": ambient.as_str(),
        "n": rel.n,
    })
}

fn relation_csv(rel: &LinearRelation) -> String {
    let mut csv = String::from("coeff,word\n");
    for (c, w) in rel.terms() {
        csv.push_str(&format!("{c},{w}\n"));
    }
    csv
}

pub fn substitute(a: &RelationArgs) -> Result<Report> {
    let b = build_relation(a)?;
    let d = b.rel.word_length()?;
    let text = format!(
        "{}\nterms: {}, length: {d}, alphabet: {}\n",
        b.rel,
        b.rel.len(),
        b.rel.n
    );
    let mut json = relation_json(&b.rel, Ambient::Cyclic);
    json["params"] = json!({"relation": b.label, "m": b.m});
    json["d"] = json!(d);
    Ok(Report {
        text,
        csv: relation_csv(&b.rel),
        json,
        ok: true,
    })
}

pub fn certify(
    engine: &SpanEngine,
    mode: RankMode,
    a: &RelationArgs,
    d: Option<usize>,
    ambient: Option<AmbientArg>,
) -> Result<Report> {
    let b = build_relation(a)?;
    let len = b.rel.word_length()?;
    let d = d.unwrap_or(len);
    let ambient = match ambient {
        Some(AmbientArg::Cyclic) => Ambient::Cyclic,
        Some(AmbientArg::Dihedral) => Ambient::Dihedral,
        None if b.m == 2 && b.rel.n == 2 => Ambient::Dihedral,
        None => Ambient::Cyclic,
    };
    let cert = certify_nontrivial(&b.rel, d, ambient, b.m, engine)?;
    let mut text = format!(
        "relation: {}\nnontrivial ({}): {}\nvanishes on uMPS({}, {}, {d}): {} ({})\n",
        cert.merged,
        ambient.as_str(),
        yes(cert.nontrivial),
        b.m,
        b.rel.n,
        yes(cert.annihilates_span),
        mode_label(cert.mode)
    );
    let mut json = cert.to_json();
    json["params"] = json!({"relation": b.label, "d": d});
    let mut kernel_ok = true;
    if b.m == 2 && b.rel.n == 2 && cert.nontrivial {
        if let Ok(k) = binary_kernel_check(&b.rel, engine, mode) {
            text.push_str(&format!(
                "weight {}: {} bracelets, rank {}, kernel dimension {}, in kernel: {}, spans kernel: {}\n",
                k.ones,
                k.bracelets,
                k.rank,
                k.kernel_dim,
                yes(k.in_kernel),
                yes(k.spans_kernel)
            ));
            kernel_ok = k.in_kernel;
            json["kernel"] = serde_json::to_value(&k)?;
        }
    }
    let ok = cert.nontrivial && cert.annihilates_span && kernel_ok;
    let csv = format!(
        "d,ambient,terms,nontrivial,annihilates_span,certificate\n{d},{},{},{},{},{}\n",
        ambient.as_str(),
        cert.merged.len(),
        yes(cert.nontrivial),
        yes(cert.annihilates_span),
        mode_label(cert.mode)
    );
    Ok(Report { text, csv, json, ok })
}

pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let s = s.trim();
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (a.parse()?, b.parse()?)
    } else if let Some((a, b)) = s.split_once("..") {
        (a.parse()?, b.parse()?)
    } else {
        let d = s.parse()?;
        (d, d)
    };
    if lo == 0 || lo > hi {
        bail!("bad range {s:?}");
    }
    Ok((lo, hi))
}

pub fn conjecture(engine: &SpanEngine, mode: RankMode, range: &str) -> Result<Report> {
    let (lo, hi) = parse_range(range).context("--d expects N or A..B")?;
    let mut text = String::new();
    let mut csv = String::from("d,computed,predicted,total,predicted_total,upper_bound,status\n");
    let mut rows = Vec::new();
    let mut ok = true;
    for d in lo..=hi {
        let ch = engine.binary_character(d, mode)?;
        let row = ConjectureRow::from_character(&ch);
        let half = d / 2 + 1;
        let bound_ok = row.total as i128 <= row.upper_bound;
        let status = if row.matches() { "MATCH" } else { "MISMATCH" };
        ok &= row.matches() && bound_ok;
        text.push_str(&format!(
            "d={d} computed {} predicted {} total {}/{} bound {}{} {status}\n",
            join(&row.computed[..half], ","),
            join(&row.predicted[..half], ","),
            row.total,
            row.predicted_total,
            row.upper_bound,
            if bound_ok { "" } else { " (EXCEEDED)" }
        ));
        csv.push_str(&format!(
            "{d},{},{},{},{},{},{status}\n",
            join(&row.computed[..half], ";"),
            join(&row.predicted[..half], ";"),
            row.total,
            row.predicted_total,
            row.upper_bound
        ));
        let mut j = serde_json::to_value(&row)?;
        j["status"] = json!(status);
        j["within_bound"] = json!(bound_ok);
        rows.push(j);
    }
    Ok(Report {
        text,
        csv,
        json: json!({"params": {"d": [lo, hi]}, "mode": mode, "rows": rows}),
        ok,
    })
}

pub fn dump_trace_param(engine: &SpanEngine, mode: RankMode, d: usize, matrix_market: Option<usize>) -> Result<Report> {
    if let Some(w) = matrix_market {
        let cm = engine.coefficient_matrix(&SpanRequest::binary(d, w).with_mode(mode))?;
        let mtx = cm.to_matrix_market();
        return Ok(Report {
            text: mtx.clone(),
            csv: mtx.clone(),
            json: json!({"params": {"d": d, "w": w}, "matrix_market": mtx}),
            ok: true,
        });
    }
    let polys = engine.trace_param().trace_param_vector(d, &engine.caps, engine.exec)?;
    let mut text = String::new();
    let mut csv = String::from("bracelet,ones,polynomial\n");
    let mut map = serde_json::Map::new();
    for (b, p) in &polys {
        text.push_str(&format!("{b}\t{p}\n"));
        csv.push_str(&format!("{b},{},{p}\n", b.ones()));
        map.insert(b.to_string(), json!(p.to_string()));
    }
    let json = json!({
        "params": {"d": d},
        "generators": ["T0", "T1", "T00", "T01", "T11"],
        "grading": GRADING,
        "ones": ONES,
        "polys": map,
    });
    Ok(Report {
        text,
        csv,
        json,
        ok: true,
    })
}
