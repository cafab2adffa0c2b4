import json

import pytest

from evenclifford.cli import dumps, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out.strip()
    return code, (json.loads(out) if out else None), out


def test_c0_quaternions(capsys):
    code, data, raw = call(capsys, "c0", "--ring", "q", "--form", "1,1,1,0,0,0")
    assert code == 0
    c = data["constants"]
    assert [c[i][i] for i in (1, 2, 3)] == [["-1", "0", "0", "0"]] * 3
    assert c[1][2] == ["0", "0", "0", "-1"]
    assert dumps(json.loads(raw)) == raw


def test_d0_example(capsys):
    code, data, _ = call(capsys, "d0", "--ring", "fp:2", "--form", "0,0,1,0,0,1")
    assert code == 0 and data == {"d0": "1", "semiregular": True}


def test_semiregular_reports_azumaya(capsys):
    code, data, _ = call(capsys, "semiregular", "--ring", "fp:3", "--bilinear", "1,0,0,0,1,0,0,0,1")
    assert code == 0 and data == {"azumaya": True, "d0": "1", "semiregular": True}


def test_upsilon_recover_round_trip(capsys):
    code, data, _ = call(capsys, "upsilon", "--ring", "dual:3", "--bilinear", "1+2e,0,1,2,0e,1,0,0,2")
    assert code == 0
    flat = ",".join(x for plane in data["constants"] for row in plane for x in row)
    code, back, _ = call(capsys, "recover", "--ring", "dual:3", "--constants", flat)
    assert code == 0 and back["bilinear"] == data["bilinear"]
    code, rt, _ = call(capsys, "recover", "--ring", "q", "--bilinear", "1/2,2,3,4,5,6,7,8,-9")
    assert code == 0 and rt["round_trip"]


def test_recover_rejects_non_specialized(capsys):
    from evenclifford.azumaya import find_non_specialized
    from evenclifford.ring import prime_field

    A = find_non_specialized(prime_field(2))
    flat = ",".join(str(x) for plane in A.constants for row in plane for x in row)
    code, data, _ = call(capsys, "recover", "--ring", "fp:2", "--constants", flat)
    assert code == 1 and data["error"] == "NotSpecialized"


def test_opposite(capsys):
    code, data, _ = call(capsys, "opposite", "--ring", "fp:5", "--bilinear", "1,2,3,4,0,1,2,3,4")
    assert code == 0 and data["matches"]
    assert data["partner"] == [["4", "1", "3"], ["3", "0", "2"], ["2", "4", "1"]]


@pytest.mark.parametrize("variant", ["splus:1", "s:3", "splus:-3"])
def test_lift(capsys, variant):
    code, data, _ = call(
        capsys, "lift", "--ring", "fp:5", "--form", "1,2,3,0,1,0",
        "--similarity", "1,1,0,0,1,0,0,0,2,3", "--variant", variant,
    )
    assert code == 0 and data["section"]


def test_lift_sprime_non_square(capsys):
    code, data, _ = call(
        capsys, "lift", "--ring", "fp:5", "--form", "1,2,3,0,1,0",
        "--similarity", "1,1,0,0,1,0,0,0,2,3", "--variant", "sprime",
    )
    assert code == 1 and data["error"] == "SquareRootUnavailable"


def test_classify_f2(capsys):
    code, data, _ = call(capsys, "classify", "--field", "fp:2")
    assert code == 0 and data["equal"]
    assert data["witt_classes"] == data["orbit_classes"] == len(data["classes"])
    assert sum(c["size"] for c in data["classes"]) == 64


def test_autgroup(capsys):
    code, data, _ = call(capsys, "autgroup", "--ring", "fp:3", "--form", "1,1,1,0,0,0")
    assert code == 0 and data["order"] == 24 and data["determinants"] == ["1"]


def test_verify_suite(capsys):
    code, data, raw = call(capsys, "verify", "--suite", "f2-bijection")
    assert code == 0 and data["pass"] is True
    assert dumps(json.loads(raw)) == raw


@pytest.mark.parametrize(
    "argv,err",
    [
        (["d0", "--ring", "fp:4", "--form", "1,0,0,0,0,0"], "DescriptorError"),
        (["d0", "--ring", "fp:2", "--form", "1,0"], "UsageError"),
        (["d0", "--form", "1,0,0,0,0,0"], "UsageError"),
        (["verify", "--suite", "nope"], "UsageError"),
        (["verify"], "UsageError"),
        (["classify"], "UsageError"),
    ],
)
def test_usage_errors(capsys, argv, err):
    code, data, _ = call(capsys, *argv)
    assert code == 2 and data["error"] == err


def test_domain_error(capsys):
    code, data, _ = call(capsys, "autgroup", "--ring", "fp:5", "--form", "1,1,1,0,0,0")
    assert code == 1 and data["error"] == "FieldTooLarge"


def test_unknown_command(capsys):
    assert run(["bogus"]) == 2
