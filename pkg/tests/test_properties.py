"""
Corpus-wide laws and independent oracles.
"""

import math
import random
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from semantic_sbml.annodb import AnnotationStore
from semantic_sbml.balancing import (
    Observation,
    balance,
    build_problem,
    get_default_balancing_config,
)
from semantic_sbml.diffmerge import diff_models, merge_models, split_model
from semantic_sbml.errors import MergeConflict, NonFiniteResult
from semantic_sbml.formats import parse_shorthand, print_shorthand, read_sbml, write_sbml
from semantic_sbml.model import (
    Add,
    Div,
    Mul,
    Neg,
    Number,
    Pow,
    Sub,
    Symbol,
    eval_expression,
    parse_infix,
    to_infix,
    validate_model,
)
from semantic_sbml.store import ModelStore

from .conftest import LEFT_MODEL, MY_MODEL, RIGHT_MODEL, TRIANGLE, family_corpus
from .test_balancing import ENZYME_MODEL


def fixture_models():
    """Reference models followed by the family corpus"""
    named = [
        (name, parse_shorthand(text))
        for name, text in (
            ("my", MY_MODEL),
            ("triangle", TRIANGLE),
            ("left", LEFT_MODEL),
            ("right", RIGHT_MODEL),
            ("enzyme", ENZYME_MODEL),
        )
    ]
    return named + family_corpus()


MODELS = fixture_models()
MODEL_IDS = [label for label, _ in MODELS]


class TestModelLaws:
    """Test diff, merge, split and round-trip identities on every fixture model"""

    @pytest.mark.parametrize("doc", [doc for _, doc in MODELS], ids=MODEL_IDS)
    def test_self_diff_is_empty(self, doc):
        """Test a model has no differences with itself"""
        report = diff_models(doc, doc)
        assert report.summary == {"identical": True, "added": 0, "removed": 0, "changed": 0}

    @pytest.mark.parametrize("doc", [doc for _, doc in MODELS], ids=MODEL_IDS)
    def test_self_merge_is_identity(self, doc):
        """Test merging a model with itself gives it back"""
        result = merge_models([doc, doc])
        assert result.document == doc
        assert not result.conflicts
        assert len(result.renames) == 0

    @pytest.mark.parametrize("doc", [doc for _, doc in MODELS], ids=MODEL_IDS)
    def test_full_split_is_identity(self, doc):
        """Test seeding every element reproduces the model"""
        assert split_model(doc, doc.all_ids()) == doc

    @pytest.mark.parametrize("doc", [doc for _, doc in MODELS], ids=MODEL_IDS)
    def test_round_trips(self, doc):
        """Test SBML and shorthand write-then-read identities"""
        assert read_sbml(write_sbml(doc)) == doc
        assert parse_shorthand(print_shorthand(doc)) == doc
        assert write_sbml(read_sbml(write_sbml(doc))) == write_sbml(doc)

    def test_empty_diff_iff_clean_merge(self, left_model):
        """Test models without differences merge to the left model"""
        twin = parse_shorthand(RIGHT_MODEL.replace("atp=3", "atp=2"))
        assert not diff_models(left_model, twin)
        assert merge_models([left_model, twin]).document == left_model
        rng = random.Random(11)
        for _ in range(20):
            (_, a), (_, b) = rng.sample(MODELS, 2)
            try:
                clean = merge_models([a, b]).document == a
            except MergeConflict:
                clean = False
            assert (not diff_models(a, b)) == clean

    @pytest.mark.slow
    def test_random_splits_validate(self):
        """Test submodels for random seed sets always validate"""
        rng = random.Random(3)
        for _ in range(200):
            _, doc = rng.choice(MODELS)
            ids = doc.all_ids()
            seeds = rng.sample(ids, rng.randint(1, len(ids)))
            report = validate_model(split_model(doc, seeds))
            assert report.ok, report.to_tsv()


EXPRESSION_SYMBOLS = ("A", "B", "kf", "Km", "x")
BINARY_NODES = (Add, Sub, Mul, Div, Pow)


def random_expression(rng, depth):
    """Random tree of at most ``depth`` levels with non-negative literals."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Symbol(rng.choice(EXPRESSION_SYMBOLS))
        return Number(rng.choice([0.0, 1.0, 2.0, 0.5, round(rng.uniform(0, 10), 3)]))
    if rng.random() < 0.15:
        return Neg(random_expression(rng, depth - 1))
    node = rng.choice(BINARY_NODES)
    return node(random_expression(rng, depth - 1), random_expression(rng, depth - 1))


def reference_value(expr, env):
    """Recursive float evaluation; None when any step is undefined or not finite."""
    if isinstance(expr, Number):
        return float(expr.value)
    if isinstance(expr, Symbol):
        return float(env[expr.name])
    if isinstance(expr, Neg):
        operand = reference_value(expr.operand, env)
        return None if operand is None else -operand
    left = reference_value(expr.left, env)
    right = reference_value(expr.right, env)
    if left is None or right is None:
        return None
    try:
        if isinstance(expr, Add):
            value = left + right
        elif isinstance(expr, Sub):
            value = left - right
        elif isinstance(expr, Mul):
            value = left * right
        elif isinstance(expr, Div):
            value = left / right
        else:
            value = left**right
    except (ZeroDivisionError, OverflowError):
        return None
    if isinstance(value, complex) or not math.isfinite(value):
        return None
    return value


class TestExpressionLaws:
    """Test evaluation and infix printing on random trees"""

    def test_evaluation_matches_reference(self):
        """Test 1000 random trees evaluate like the plain recursive evaluator"""
        rng = random.Random(17)
        for _ in range(1000):
            expr = random_expression(rng, 8)
            env = {name: rng.uniform(0.1, 3.0) for name in EXPRESSION_SYMBOLS}
            expected = reference_value(expr, env)
            if expected is None:
                with pytest.raises(NonFiniteResult):
                    eval_expression(expr, env)
            else:
                assert math.isclose(
                    eval_expression(expr, env), expected, rel_tol=1e-12, abs_tol=1e-12
                ), to_infix(expr)

    def test_print_then_parse(self):
        """Test 1000 random trees read back from their printed text"""
        rng = random.Random(23)
        for _ in range(1000):
            expr = random_expression(rng, 8)
            assert parse_infix(to_infix(expr)) == expr, to_infix(expr)


def union_find_partition(pairs):
    """Partition of every URI in ``pairs`` under the symmetric closure."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    groups = {}
    for uri in list(parent):
        groups.setdefault(find(uri), set()).add(uri)
    return {frozenset(members) for members in groups.values()}


class TestAnnotationClosure:
    """Test the equivalence partition against a union-find oracle"""

    @pytest.mark.slow
    def test_random_crossrefs(self, tmp_path):
        """Test 1000 random cross-reference pairs"""
        rng = random.Random(5)
        uris = [f"identifiers.org/go/GO:{i:07d}" for i in range(300)]
        pairs = []
        while len(pairs) < 1000:
            a, b = rng.sample(uris, 2)
            pairs.append((a, b))
        crossrefs = {}
        for a, b in pairs:
            crossrefs.setdefault(a, set()).add(b)
        lines = [f"{a}\tterm {a[-7:]}\t{'|'.join(sorted(refs))}" for a, refs in crossrefs.items()]

        store = AnnotationStore(tmp_path / "db")
        store.ingest_records("\n".join(lines))
        assert set(store.classes()) == union_find_partition(pairs)

        log = (tmp_path / "db" / "records.log").read_bytes()
        index = (tmp_path / "db" / "index.json").read_bytes()
        store.ingest_records("\n".join(lines))
        assert (tmp_path / "db" / "records.log").read_bytes() == log
        assert (tmp_path / "db" / "index.json").read_bytes() == index


def dense_posterior(problem):
    """Posterior mean and covariance by explicit matrix inversion."""
    observations = problem.observations
    design = problem.dependence[[problem.row(o.instance) for o in observations]]
    y = np.array([o.mean for o in observations])
    noise_inv = np.diag(1.0 / np.array([o.std for o in observations]) ** 2)
    prior_inv = np.linalg.inv(np.diag(problem.prior_std**2))
    cov = np.linalg.inv(prior_inv + design.T @ noise_inv @ design)
    mean = cov @ (prior_inv @ problem.prior_mean + design.T @ noise_inv @ y)
    return mean, cov


ORACLE_CASES = [
    (MY_MODEL, None),
    (MY_MODEL, "KM\treaction1\tA\t0.5\t0.5\tmM\nKeq\treaction1\t\t3\t0.2\n"),
    (TRIANGLE, "Keq\tr1\t\t10\t0.1\nKeq\tr2\t\t10\t0.1\nKeq\tr3\t\t10\t0.1\n"),
    (TRIANGLE, "StdChemPotential\t\tA\t-20\t2\tkJ/mol\nConc\t\tB\t50\t0.4\tuM\n"),
    (ENZYME_MODEL, "KcatFwd\tv1\t\t40\t0.3\t1/s\nKM\tv1\tS\t0.2\t0.5\tmM\n"),
]


class TestBalancingOracle:
    """Test the posterior against dense inversion"""

    @pytest.mark.parametrize("text, data", ORACLE_CASES)
    def test_matches_dense_inversion(self, text, data):
        """Test mean and covariance agree with the explicit formula"""
        problem = build_problem(parse_shorthand(text), data)
        balanced = balance(problem)
        mean, cov = dense_posterior(problem)
        np.testing.assert_allclose(
            balanced.posterior_mean[: problem.n_basic], mean, rtol=1e-8, atol=1e-9
        )
        scale = np.abs(cov).max()
        np.testing.assert_allclose(balanced.posterior_cov, cov, rtol=1e-7, atol=1e-9 * scale)

    @pytest.mark.parametrize("text", [MY_MODEL, TRIANGLE, ENZYME_MODEL])
    def test_zero_evidence(self, text):
        """Test the posterior equals the prior without data or pseudo values"""
        config = get_default_balancing_config().model_copy(update={"use_pseudo_values": False})
        problem = build_problem(parse_shorthand(text), config=config)
        balanced = balance(problem)
        np.testing.assert_allclose(
            balanced.posterior_mean[: problem.n_basic], problem.prior_mean, rtol=1e-14
        )
        np.testing.assert_allclose(
            balanced.posterior_cov, np.diag(problem.prior_std**2), rtol=1e-14
        )


class TestMonotoneInformation:
    """Test extra data never widens the posterior"""

    @pytest.mark.parametrize("seed", range(5))
    def test_added_row_never_increases_variance(self, seed):
        """Test every basic posterior variance shrinks or stays when a row is added"""
        rng = random.Random(seed)
        config = get_default_balancing_config().model_copy(update={"use_pseudo_values": False})
        for _ in range(20):
            doc = parse_shorthand(rng.choice([MY_MODEL, TRIANGLE, ENZYME_MODEL]))
            instances = build_problem(doc, config=config).instances
            rows = [
                Observation(rng.choice(instances), rng.uniform(0.1, 10.0), rng.uniform(0.05, 2.0))
                for _ in range(rng.randint(0, 4))
            ]
            extra = Observation(
                rng.choice(instances), rng.uniform(0.1, 10.0), rng.uniform(0.05, 2.0)
            )
            before = np.diag(balance(build_problem(doc, rows, config)).posterior_cov)
            after = np.diag(balance(build_problem(doc, rows + [extra], config)).posterior_cov)
            assert np.all(after <= before * (1 + 1e-7) + 1e-12), (rows, extra)


class TestConcurrentStore:
    """Test the model store under concurrent writers"""

    @pytest.mark.integration
    def test_parallel_puts(self, tmp_path):
        """Test 50 concurrent writes leave one intact object per model"""
        store = ModelStore(tmp_path)
        docs = [doc for _, doc in MODELS]
        work = [docs[i % len(docs)] for i in range(50)]
        with ThreadPoolExecutor(max_workers=8) as pool:
            handles = list(pool.map(store.put, work))
        assert len(store) == len(set(handles)) == len(docs)
        for handle, doc in zip(handles, work):
            assert store.load(handle) == doc
        assert not list(tmp_path.glob("*/.model-*.tmp"))
