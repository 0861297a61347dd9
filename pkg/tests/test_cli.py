import io
import json
from pathlib import Path

from extsheaf.cli import (
    load_document,
    parse_faces_output,
    parse_labels_output,
    run,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "extsheaf" / "data"


def invoke(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def invoke_json(*argv):
    code, text = invoke(*argv)
    return code, json.loads(text)


class TestBasics:
    def test_validate_shipped_data(self):
        for name in ["p1_trivial", "p1_halfint", "p1xp1", "p2",
                     "canonical_l1", "canonical_l2", "synthetic_symmetric_rank1"]:
            code, payload = invoke_json("--input", str(DATA / f"{name}.json"), "--command", "validate")
            assert code == 0, payload
            assert all(c["status"] == "pass" for c in payload["checks"])

    def test_hilbert_block_00_p1(self):
        code, payload = invoke_json("--input", str(DATA / "p1_trivial.json"),
                                    "--command", "hilbert", "--block", "0:0", "--cutoff", "8")
        assert code == 0
        assert payload["blocks"] == [{"alpha": 0, "beta": 0, "hilbert": [1, 0, 2, 0, 2, 0, 2, 0, 2]}]

    def test_faces_l1(self):
        code, payload = invoke_json("--input", str(DATA / "canonical_l1.json"), "--command", "faces")
        assert code == 0
        faces = payload["faces"]
        assert len(faces) == 3

    def test_ext_single_block(self):
        code, payload = invoke_json("--input", str(DATA / "p1_trivial.json"),
                                    "--command", "ext", "--block", "0:0", "--cutoff", "6")
        assert code == 0
        blk = payload["blocks"][0]
        assert blk["hilbert"] == [1, 0, 2, 0, 2, 0, 2]
        # the diagonal block table is closed under its own products
        names = {b["name"] for b in blk["basis"]}
        for x, y, z, c in blk["table"]:
            assert {x, y, z} <= names

    def test_tsv_mode(self):
        code, text = invoke("--input", str(DATA / "p1_trivial.json"),
                            "--command", "hilbert", "--block", "0:0", "--cutoff", "4", "--format", "tsv")
        assert code == 0
        assert "hilbert" in text and "1,0,2,0,2" in text


class TestErrors:
    def test_missing_file_is_schema_error(self):
        code, payload = invoke_json("--input", "/nonexistent.json", "--command", "validate")
        assert code == 1
        assert payload["error"]["kind"] == "schema"

    def test_bad_flag_usage(self):
        code, payload = invoke_json("--input", str(DATA / "p1_trivial.json"), "--command", "bogus")
        assert code == 1

    def test_datum_invalid(self, tmp_path):
        bad = {
            "mode": "symmetric", "labels": "all", "cutoff": 4,
            "symmetric": {
                "V": ["a", "b"], "S": [[], ["a"], ["a", "b"]], "l": 0,
                "Jmap": {"-": [], "a": [], "a+b": []}, "m": 2,
                "D_subspaces": {"-": [], "a": [[1, 0]], "a+b": [[1, 0], [0, 1]]}},
        }
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(bad))
        code, payload = invoke_json("--input", str(p), "--command", "validate")
        assert code == 2
        assert payload["error"]["kind"] == "datum-invalid"
        assert "downward" in payload["error"]["message"]

    def test_odd_cutoff_rejected(self):
        code, payload = invoke_json("--input", str(DATA / "p1_trivial.json"),
                                    "--command", "validate", "--cutoff", "7")
        assert code == 1

    def test_schema_error_names_missing_key(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"mode": "toric", "toric": {"lattice_rank": 1}}))
        code, payload = invoke_json("--input", str(p), "--command", "validate")
        assert code == 1
        assert "overlattice_generators" in payload["error"]["message"]


class TestRoundTrip:
    def test_faces_roundtrip(self):
        from extsheaf.cli import document_datum

        for name in ["canonical_l2", "p1xp1"]:
            code, payload = invoke_json("--input", str(DATA / f"{name}.json"), "--command", "faces")
            assert code == 0
            doc = load_document(str(DATA / f"{name}.json"))
            datum, _, _, _ = document_datum(doc)
            assert parse_faces_output(payload) == datum.faces()

    def test_labels_roundtrip(self):
        from extsheaf.cli import document_datum
        from extsheaf.isotropy import build_catalog

        for name in ["p1_halfint", "canonical_l1"]:
            code, payload = invoke_json("--input", str(DATA / f"{name}.json"), "--command", "labels")
            assert code == 0
            doc = load_document(str(DATA / f"{name}.json"))
            datum, _, labels, _ = document_datum(doc)
            catalog = build_catalog(datum.isotropy, datum.V, labels)
            assert parse_labels_output(payload) == [(lab.orbit, lab.char) for lab in catalog.labels]


class TestDeterminism:
    def test_repeat_runs_byte_identical(self):
        args = ("--input", str(DATA / "p1_halfint.json"), "--command", "check-all",
                "--cutoff", "8", "--seed", "5")
        code1, text1 = invoke(*args)
        code2, text2 = invoke(*args)
        assert code1 == code2 == 0
        assert text1 == text2

    def test_cohomology_deterministic(self):
        args = ("--input", str(DATA / "canonical_l1.json"), "--command", "cohomology", "--cutoff", "6")
        _, text1 = invoke(*args)
        _, text2 = invoke(*args)
        assert text1 == text2
