//! Text formats for point sets, manifests and trees.
//!
//! Point file:
//! ```text
//! dim 2 count 2 mode exact
//! 0 0
//! 1/2 3
//! ```
//! Manifest:
//! ```text
//! k 2
//! dim 2
//! mode exact
//! delta2 1 1
//! layer 1 a.pts
//! layer 2 b.pts
//! layer 3 a.pts
//! ```
//! Tree file (1-based vertices): `tree 3`, then `edge 1 2 1` lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{
    format_rational, parse_rational, Coords, DistanceSpec, Mode, Point, PointSet, ScalarKind,
};
use crate::layered::{LabeledTree, LayeredConfig, TreeEdge};

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Meaningful lines with their 1-based numbers; `#` starts a comment.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn format_points(set: &PointSet) -> String {
    let mut out = format!(
        "dim {} count {} mode {}\n",
        set.dim(),
        set.len(),
        set.kind()
    );
    for p in set.iter() {
        let fields: Vec<String> = match p.coords() {
            Coords::Exact(c) => c.iter().map(format_rational).collect(),
            Coords::Float(c) => c.iter().map(f64::to_string).collect(),
        };
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_points(text: &str, path: &Path) -> Result<PointSet> {
    let mut it = lines(text);
    let (hline, header) = it
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty point file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let (dim, count, kind) = match h.as_slice() {
        ["dim", d, "count", m, "mode", kind] => {
            let dim: usize = d
                .parse()
                .map_err(|_| parse_err(path, hline, "bad dimension"))?;
            let count: usize = m.parse().map_err(|_| parse_err(path, hline, "bad count"))?;
            let kind = match *kind {
                "exact" => ScalarKind::Exact,
                "float" => ScalarKind::Float,
                other => return Err(parse_err(path, hline, format!("unknown mode `{other}`"))),
            };
            (dim, count, kind)
        }
        _ => {
            return Err(parse_err(
                path,
                hline,
                "expected `dim <d> count <m> mode <exact|float>`",
            ))
        }
    };
    let mut points = Vec::with_capacity(count);
    for (no, line) in it {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != dim {
            return Err(parse_err(
                path,
                no,
                format!("{} coordinates, expected {dim}", fields.len()),
            ));
        }
        let id = points.len();
        let p = match kind {
            ScalarKind::Exact => {
                let c = fields
                    .iter()
                    .map(|f| parse_rational(f).map_err(|e| parse_err(path, no, e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Point::exact(id, c)
            }
            ScalarKind::Float => {
                let c = fields
                    .iter()
                    .map(|f| {
                        f.parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| parse_err(path, no, format!("bad coordinate `{f}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Point::float(id, c)
            }
        };
        points.push(p);
    }
    if points.len() != count {
        return Err(parse_err(
            path,
            hline,
            format!("header announces {count} points, found {}", points.len()),
        ));
    }
    PointSet::new(dim, kind, points).map_err(|e| parse_err(path, hline, e.to_string()))
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    parse_points(&fs::read_to_string(path)?, path)
}

pub fn write_points(path: &Path, set: &PointSet) -> Result<()> {
    fs::write(path, format_points(set))?;
    Ok(())
}

/// Manifest text referring to the given layer files, which are relative to
/// the manifest's directory unless absolute.
pub fn format_manifest(config: &LayeredConfig, files: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "k {}", config.k()).unwrap();
    writeln!(out, "dim {}", config.dim()).unwrap();
    match config.mode() {
        Mode::Exact => writeln!(out, "mode exact").unwrap(),
        Mode::Tolerant(eps) => writeln!(out, "mode tol {eps:e}").unwrap(),
    }
    let d: Vec<String> = config.delta2().iter().map(format_rational).collect();
    writeln!(out, "delta2 {}", d.join(" ")).unwrap();
    for (i, f) in files.iter().enumerate() {
        writeln!(out, "layer {} {f}", i + 1).unwrap();
    }
    out
}

/// Writes the manifest and one point file per distinct layer, named
/// `<stem>.layer<i>.pts` next to it. Identical layers share a file.
pub fn write_manifest(path: &Path, config: &LayeredConfig) -> Result<()> {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "config".into());
    let dir = path.parent().unwrap_or(Path::new(""));
    let mut written: Vec<(String, String)> = Vec::new();
    let mut files = Vec::with_capacity(config.k() + 1);
    for (i, layer) in config.layers().iter().enumerate() {
        let text = format_points(layer);
        let name = match written.iter().find(|(t, _)| *t == text) {
            Some((_, name)) => name.clone(),
            None => {
                let name = format!("{stem}.layer{}.pts", i + 1);
                fs::write(dir.join(&name), &text)?;
                written.push((text, name.clone()));
                name
            }
        };
        files.push(name);
    }
    fs::write(path, format_manifest(config, &files))?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<LayeredConfig> {
    let text = fs::read_to_string(path)?;
    let dir = path.parent().unwrap_or(Path::new(""));
    let mut k = None;
    let mut dim = None;
    let mut mode = Mode::Exact;
    let mut delta2 = None;
    let mut layers: BTreeMap<usize, (usize, PathBuf)> = BTreeMap::new();
    for (no, line) in lines(&text) {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(path, no, format!("bad number `{s}`")))
        };
        match key {
            "k" => k = Some(num(rest)?),
            "dim" => dim = Some(num(rest)?),
            "mode" => {
                mode = rest
                    .parse()
                    .map_err(|e: Error| parse_err(path, no, e.to_string()))?
            }
            "delta2" => {
                delta2 = Some(
                    rest.split_whitespace()
                        .map(|f| parse_rational(f).map_err(|e| parse_err(path, no, e.to_string())))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "layer" => {
                let (i, file) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| parse_err(path, no, "expected `layer <i> <path>`"))?;
                let i = num(i)?;
                if i == 0 {
                    return Err(parse_err(path, no, "layers are numbered from 1"));
                }
                if layers.insert(i, (no, dir.join(file.trim()))).is_some() {
                    return Err(parse_err(path, no, format!("layer {i} given twice")));
                }
            }
            other => return Err(parse_err(path, no, format!("unknown key `{other}`"))),
        }
    }
    let k = k.ok_or_else(|| parse_err(path, 1, "missing `k`"))?;
    let delta2 = delta2.ok_or_else(|| parse_err(path, 1, "missing `delta2`"))?;
    if delta2.len() != k {
        return Err(parse_err(
            path,
            1,
            format!("{} squared distances for k = {k}", delta2.len()),
        ));
    }
    let mut cache: BTreeMap<PathBuf, PointSet> = BTreeMap::new();
    let mut sets = Vec::with_capacity(k + 1);
    for i in 1..=k + 1 {
        let (no, file) = layers
            .get(&i)
            .ok_or_else(|| parse_err(path, 1, format!("missing layer {i}")))?;
        if !cache.contains_key(file) {
            cache.insert(file.clone(), read_points(file)?);
        }
        let set = cache[file].clone();
        if let Some(d) = dim {
            if set.dim() != d {
                return Err(parse_err(
                    path,
                    *no,
                    format!("layer {i} has dimension {}, expected {d}", set.dim()),
                ));
            }
        }
        sets.push(set);
    }
    if let Some((&extra, &(no, _))) = layers.range(k + 2..).next() {
        return Err(parse_err(
            path,
            no,
            format!("layer {extra} exceeds k + 1 = {}", k + 1),
        ));
    }
    LayeredConfig::new(sets, DistanceSpec::new(delta2, mode)?)
}

pub fn format_tree(tree: &LabeledTree) -> String {
    let mut out = format!("tree {}\n", tree.vertex_count());
    for e in tree.edges() {
        writeln!(
            out,
            "edge {} {} {}",
            e.a + 1,
            e.b + 1,
            format_rational(&e.d2)
        )
        .unwrap();
    }
    out
}

pub fn parse_tree(text: &str, path: &Path) -> Result<LabeledTree> {
    let mut it = lines(text);
    let (hline, header) = it
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty tree file"))?;
    let count = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["tree", v] => v
            .parse::<usize>()
            .map_err(|_| parse_err(path, hline, "bad vertex count"))?,
        _ => return Err(parse_err(path, hline, "expected `tree <vertices>`")),
    };
    let mut edges = Vec::new();
    for (no, line) in it {
        let f: Vec<&str> = line.split_whitespace().collect();
        let ["edge", a, b, d2] = f.as_slice() else {
            return Err(parse_err(path, no, "expected `edge <i> <j> <d2>`"));
        };
        let vertex = |s: &str| match s.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(parse_err(path, no, format!("bad vertex `{s}`"))),
        };
        edges.push(TreeEdge {
            a: vertex(a)?,
            b: vertex(b)?,
            d2: parse_rational(d2).map_err(|e| parse_err(path, no, e.to_string()))?,
        });
    }
    LabeledTree::new(count, edges).map_err(|e| parse_err(path, hline, e.to_string()))
}

pub fn read_tree(path: &Path) -> Result<LabeledTree> {
    parse_tree(&fs::read_to_string(path)?, path)
}

pub fn write_tree(path: &Path, tree: &LabeledTree) -> Result<()> {
    fs::write(path, format_tree(tree))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, ratio};

    #[test]
    fn reads_a_single_point() {
        let set = parse_points("dim 2 count 1 mode exact\n1/2 1/2\n", Path::new("x")).unwrap();
        assert_eq!(
            set.get(0).exact_coords().unwrap(),
            &[ratio(1, 2), ratio(1, 2)]
        );
    }

    #[test]
    fn count_mismatch_is_an_error() {
        let e = parse_points("dim 2 count 2 mode exact\n0 0\n", Path::new("x")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        assert!(parse_points("dim 2 count 1 mode exact\n1/0 0\n", Path::new("x")).is_err());
        assert!(parse_points("dim 2 count 1 mode exact\n1 2 3\n", Path::new("x")).is_err());
        assert!(parse_points("dim 2 mode exact\n", Path::new("x")).is_err());
    }

    #[test]
    fn float_round_trip_is_byte_exact() {
        let set = PointSet::float(
            3,
            vec![vec![0.1, -2.5e-12, 1.0 / 3.0], vec![0.0, 7.0, 1e300]],
        )
        .unwrap();
        let text = format_points(&set);
        assert_eq!(
            format_points(&parse_points(&text, Path::new("x")).unwrap()),
            text
        );
    }

    #[test]
    fn manifest_round_trip_with_aliases() {
        let dir = tempfile::tempdir().unwrap();
        let set = PointSet::exact(1, vec![vec![int(0)], vec![int(1)], vec![ratio(5, 2)]]).unwrap();
        let config =
            LayeredConfig::repeated(set, DistanceSpec::exact(vec![int(1), ratio(9, 4)]).unwrap())
                .unwrap();
        let path = dir.path().join("m.manifest");
        write_manifest(&path, &config).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("m.layer1.pts").count(), 3);
        let back = read_manifest(&path).unwrap();
        assert_eq!(back.delta2(), config.delta2());
        assert_eq!(format_points(back.layer(2)), format_points(config.layer(2)));
    }

    #[test]
    fn manifest_rejects_short_delta() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.pts"), "dim 1 count 1 mode exact\n0\n").unwrap();
        let path = dir.path().join("m");
        fs::write(
            &path,
            "k 2\ndim 1\nmode exact\ndelta2 1\nlayer 1 a.pts\nlayer 2 a.pts\nlayer 3 a.pts\n",
        )
        .unwrap();
        assert!(read_manifest(&path).is_err());
        fs::write(&path, "k 1\ndim 1\nmode exact\ndelta2 1\nlayer 1 a.pts\n").unwrap();
        assert!(matches!(read_manifest(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn tree_round_trip() {
        let tree = LabeledTree::star(&[int(1), ratio(1, 4)]).unwrap();
        let text = format_tree(&tree);
        assert_eq!(text, "tree 3\nedge 1 2 1\nedge 1 3 1/4\n");
        assert_eq!(parse_tree(&text, Path::new("t")).unwrap(), tree);
    }
}
