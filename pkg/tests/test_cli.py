import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from splitkit.config import settings
from splitkit.errors import InputError, PresentationError
from splitkit.loaders import build_group, build_poset, build_splitting, build_subgroup
from splitkit.main import EXIT_ERROR, EXIT_OK, _apply_overrides, build_parser, config_from_args, main
from splitkit.splitting import splittings_equivalent

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(argv, capsys):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def write(path: Path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestLoaders:
    @pytest.mark.parametrize("name", sorted(p.name for p in (SAMPLES / "groups").glob("*.json")))
    def test_sample_groups(self, name):
        group = build_group(SAMPLES / "groups" / name)
        assert group.generator_names

    @pytest.mark.parametrize("name", sorted(p.name for p in (SAMPLES / "splittings").glob("*.json")))
    def test_sample_splittings(self, name):
        assert build_splitting(SAMPLES / "splittings" / name).edge_subgroup() is not None

    def test_file_matches_builtin(self, f3_left, slope01):
        assert splittings_equivalent(build_splitting(SAMPLES / "splittings" / "f3-left.json"), f3_left, 3).is_true
        assert splittings_equivalent(build_splitting(SAMPLES / "splittings" / "torus-x.json"), slope01, 3).is_true

    def test_declared_subgroup(self):
        group = build_group(SAMPLES / "groups" / "f2.json")
        assert build_subgroup(group, "curve").contains(("x", "x"))
        assert build_subgroup(group, "x y, y").contains(("x",))
        assert not build_subgroup(group, "trivial").contains(("x",))

    def test_splitting_group(self):
        group = build_group(SAMPLES / "groups" / "dihedral.json")
        assert group.is_identity(("a", "a"))
        assert not group.is_identity(("a", "b"))

    def test_unknown_keys_rejected(self):
        with pytest.raises(InputError):
            build_group({"name": "F", "generators": ["x"], "colour": "red"})

    def test_missing_table(self):
        with pytest.raises(InputError):
            build_group({"generators": ["a"], "strategy": "finite-table"})

    def test_generator_mismatch(self):
        data = json.loads((SAMPLES / "groups" / "dihedral.json").read_text())
        data["generators"] = ["b", "a"]
        with pytest.raises(PresentationError):
            build_group(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            build_poset(tmp_path / "absent.json")


class TestArguments:
    def test_dot_alias(self):
        args = build_parser().parse_args(["dtree", "--poset", "p.json", "--out", "t.dot"])
        cfg = config_from_args(args)
        assert cfg.dot_path == "t.dot"
        assert cfg.inputs == {"poset": ["p.json"]}

    def test_psi_names_actor_and_target(self):
        args = build_parser().parse_args(["psi", "--actor", "a.json", "--target", "b.json", "--depth", "4"])
        cfg = config_from_args(args)
        assert cfg.inputs == {"actor": ["a.json"], "target": ["b.json"]}
        assert cfg.depth == 4
        with pytest.raises(SystemExit):
            build_parser().parse_args(["psi", "--s", "a.json", "--t", "b.json"])

    @pytest.mark.parametrize("argv", [["ball", "--group", "g.json"], ["tree", "--splitting", "s.json"]])
    def test_out_alias_for_graphs(self, argv):
        cfg = config_from_args(build_parser().parse_args(argv + ["--out", "g.dot"]))
        assert cfg.dot_path == "g.dot"

    def test_oracle_options(self):
        args = build_parser().parse_args(["oracle", "slopes", "--a", "0/1", "--b", "1/0", "--radius", "4"])
        cfg = config_from_args(args)
        assert cfg.options == {"a": "0/1", "b": "1/0"}
        assert cfg.radius == 4

    def test_window_overrides(self):
        args = build_parser().parse_args(["ends", "--group", "g.json", "--growth-window", "4", "--stable-window", "3"])
        cfg = config_from_args(args)
        _apply_overrides(cfg)
        assert (settings.growth_window, settings.stable_window) == (4, 3)

    def test_window_below_two_rejected(self):
        args = build_parser().parse_args(["ends", "--group", "g.json", "--growth-window", "1"])
        with pytest.raises(ValidationError):
            config_from_args(args)


class TestCommands:
    def test_normal_form(self, capsys):
        code, out = run(["nf", "--splitting", str(SAMPLES / "splittings" / "z4-amalgam.json"), "--word", "a b a"], capsys)
        assert code == EXIT_OK
        names = [item["name"] for item in out["normal_form"]["syllables"]]
        assert names == ["a1", "b1", "a2", "b2", "h"]

    def test_side(self, capsys):
        code, out = run(["side", "--splitting", str(SAMPLES / "splittings" / "z.json"), "--word", "t t"], capsys)
        assert code == EXIT_OK
        assert out["member"] is True

    def test_ends(self, capsys):
        code, out = run(["ends", "--group", str(SAMPLES / "groups" / "f2.json"), "--radius", "6"], capsys)
        assert code == EXIT_OK
        assert out["value"] == "many"

    def test_self_intersection(self, tmp_path, capsys):
        report = tmp_path / "inum.json"
        z = str(SAMPLES / "splittings" / "z.json")
        code = main(["inum", "--s", z, "--t", z, "--radius", "6", "--json", str(report)])
        assert code == EXIT_OK
        data = json.loads(report.read_text())
        assert data["count"] == 0
        assert data["exact"] is True

    def test_local_tree_dot(self, tmp_path, capsys):
        dot = tmp_path / "tree.dot"
        code, out = run(["tree", "--splitting", str(SAMPLES / "splittings" / "z.json"), "--depth", "2", "--dot", str(dot)], capsys)
        assert code == EXIT_OK
        assert out["edges"] == 5
        text = dot.read_text()
        assert text.startswith('graph "tree" {')
        assert text.count(" -- ") == 5

    def test_psi(self, tmp_path, capsys):
        dot = tmp_path / "psi.dot"
        actor = str(SAMPLES / "splittings" / "slope-1-0.json")
        target = str(SAMPLES / "splittings" / "slope-0-1.json")
        code, out = run(["psi", "--actor", actor, "--target", target, "--depth", "3", "--out", str(dot)], capsys)
        assert code == EXIT_OK
        assert out["edges"] == 1
        assert out["stabilized"] is True
        assert dot.exists()

    def test_ball_out(self, tmp_path, capsys):
        dot = tmp_path / "ball.dot"
        code, out = run(["ball", "--group", str(SAMPLES / "groups" / "z.json"), "--radius", "2", "--out", str(dot)], capsys)
        assert code == EXIT_OK
        assert out["vertices"] == 5
        assert dot.read_text().count(" -- ") == 4

    def test_dtree(self, tmp_path, capsys):
        dot = tmp_path / "dtree.dot"
        code, out = run(["dtree", "--poset", str(SAMPLES / "posets" / "tripod.json"), "--out", str(dot)], capsys)
        assert code == EXIT_OK
        assert out["vertices"] == 4
        assert out["edges"] == 3
        assert dot.exists()

    def test_dtree_condition_violation(self, capsys):
        code, out = run(["dtree", "--poset", str(SAMPLES / "posets" / "not-a-tree.json")], capsys)
        assert code == EXIT_ERROR
        assert out["error"] == "PosetConditionError"

    def test_invalid_poset_file(self, tmp_path, capsys):
        bad = write(tmp_path / "bad.json", {"elements": ["e"], "involution": {"e": "e"}, "extra": 1})
        code, out = run(["dtree", "--poset", bad], capsys)
        assert code == EXIT_ERROR
        assert out["error"] == "InputError"

    def test_gog_single_splitting(self, capsys):
        code, out = run(
            ["gog", "--splittings", str(SAMPLES / "splittings" / "z.json"), "--radius", "4", "--translate-radius", "3"],
            capsys,
        )
        assert code == EXIT_OK
        assert len(out["vertices"]) == 1
        assert out["stability"] is True

    def test_repeated_runs_identical(self, tmp_path, capsys):
        outputs = []
        for n in range(2):
            report, dot = tmp_path / f"gog{n}.json", tmp_path / f"gog{n}.dot"
            code = main([
                "gog", "--splittings", str(SAMPLES / "splittings" / "z.json"),
                "--radius", "4", "--translate-radius", "3", "--json", str(report), "--dot", str(dot),
            ])
            assert code == EXIT_OK
            outputs.append((report.read_bytes(), dot.read_bytes()))
        capsys.readouterr()
        assert outputs[0] == outputs[1]
