"""
Tests for the local annotation database.
"""

import json
import logging

import pytest

from semantic_sbml.annodb import AnnotationStore, parse_record_line
from semantic_sbml.errors import MalformedRecord, UnrecognizedUriScheme

from .conftest import ATP, GLUCOSE

KEGG_GLUCOSE = "identifiers.org/kegg.compound/C00031"
KEGG_ATP = "identifiers.org/kegg.compound/C00002"


@pytest.fixture
def store(records_text):
    """In-memory store loaded with the glucose/ATP records"""
    store = AnnotationStore()
    store.ingest_records(records_text)
    return store


class TestRecordParsing:
    """Test record line parsing"""

    def test_full_record(self):
        """Test all four columns are read and normalized"""
        record = parse_record_line(
            "urn:miriam:chebi:CHEBI%3A17234\tD-glucose| glucose\t"
            "urn:miriam:kegg.compound:C00031\tis_a=identifiers.org/chebi/CHEBI:4167",
            1,
        )
        assert record.primary_uri == GLUCOSE
        assert record.names == ("D-glucose", "glucose")
        assert record.preferred_name == "D-glucose"
        assert record.crossrefs == {KEGG_GLUCOSE}
        assert record.relations == {("is_a", "identifiers.org/chebi/CHEBI:4167")}

    def test_comments_and_blanks(self):
        """Test comment and blank lines yield nothing"""
        assert parse_record_line("# header", 1) is None
        assert parse_record_line("   ", 2) is None

    @pytest.mark.parametrize(
        "line",
        [
            "identifiers.org/go/GO:1",
            "identifiers.org/go/GO:1\ta\tb\tc\td",
            "identifiers.org/go/GO:1\t | \t",
            "identifiers.org/go/GO:1\tname\tidentifiers.org/go/GO:1",
            "http://example.org/x\tname",
            "identifiers.org/go/GO:1\tname\t\tis_a",
        ],
    )
    def test_malformed(self, line):
        """Test each malformed shape is rejected with its line number"""
        with pytest.raises(MalformedRecord) as excinfo:
            parse_record_line(line, 7)
        assert excinfo.value.line == 7
        assert excinfo.value.detail == {"line": 7}


class TestIngestion:
    """Test merging record lines into a store"""

    def test_summary(self, records_text):
        """Test accepted and changed counts"""
        summary = AnnotationStore().ingest_records(records_text)
        assert summary.to_dict() == {"accepted": 3, "rejected": 0, "changed": 3, "rejections": []}

    def test_reingest_is_idempotent(self, store, records_text):
        """Test ingesting the same lines again changes nothing"""
        before = store.snapshot()
        summary = store.ingest_records(records_text)
        assert (summary.accepted, summary.changed) == (3, 0)
        assert store.snapshot() == before

    def test_rejections_do_not_stop_ingestion(self, caplog):
        """Test bad lines are counted and good lines still land"""
        text = "\n".join([f"{ATP}\tATP", "garbage", f"{GLUCOSE}\t"])
        with caplog.at_level(logging.WARNING, logger="semantic_sbml.annodb"):
            summary = AnnotationStore().ingest_records(text)
        assert (summary.accepted, summary.rejected) == (1, 2)
        assert [e.line for e in summary.rejections] == [2, 3]
        assert "Rejected record line 2" in caplog.text

    def test_records_merge(self, store):
        """Test a second record for the same URI extends names and crossrefs"""
        pubchem = "identifiers.org/pubchem.compound/5793"
        summary = store.ingest_records([f"{GLUCOSE}\tdextrose|glucose\t{pubchem}"])
        assert summary.changed == 1
        record = store.record_for(GLUCOSE)
        assert record.names == ("D-glucose", "glucose", "dextrose")
        assert pubchem in store.equivalence_set(KEGG_GLUCOSE)

    def test_accepts_bytes(self, records_text):
        """Test byte input is decoded as UTF-8"""
        store = AnnotationStore()
        store.ingest_records(records_text.encode("utf-8"))
        assert len(store) == 3


class TestQueries:
    """Test equivalence and search queries"""

    def test_equivalence_classes(self, store):
        """Test crossrefs join URIs into classes"""
        assert store.equivalence_set(GLUCOSE) == {GLUCOSE, KEGG_GLUCOSE}
        assert store.equivalence_set("urn:miriam:kegg.compound:C00031") == {GLUCOSE, KEGG_GLUCOSE}
        assert store.classes() == [
            frozenset({ATP, KEGG_ATP}),
            frozenset({GLUCOSE, KEGG_GLUCOSE}),
        ]

    def test_relations_do_not_join_classes(self, store):
        """Test typed relations stay outside the equivalence partition"""
        assert store.equivalence_set("identifiers.org/chebi/CHEBI:4167") == {
            "identifiers.org/chebi/CHEBI:4167"
        }

    def test_unknown_uri_is_singleton(self, store):
        """Test unknown URIs form their own class"""
        assert store.equivalence_set("identifiers.org/go/GO:0006096") == {
            "identifiers.org/go/GO:0006096"
        }
        with pytest.raises(UnrecognizedUriScheme):
            store.equivalence_set("not a uri")

    def test_representative(self, store):
        """Test the representative is the smallest class member"""
        assert store.representative(KEGG_GLUCOSE) == GLUCOSE

    def test_search_by_name(self, store):
        """Test substring and exact name search"""
        hits = store.search_by_name("GLUCOSE")
        assert [r.primary_uri for r in hits] == [GLUCOSE, KEGG_GLUCOSE]
        assert [r.primary_uri for r in store.search_by_name("d-glucose", exact=True)] == [GLUCOSE]
        assert [r.primary_uri for r in store.search_by_name("triphos")] == [ATP]
        assert store.search_by_name("   ") == []

    def test_search_by_id(self, store):
        """Test id lookup returns the representative record of the class"""
        assert store.search_by_id("kegg.compound", "C00031").primary_uri == GLUCOSE
        assert store.search_by_id("kegg.compound", "C00002").primary_uri == ATP
        assert store.search_by_id("go", "GO:0006096") is None


class TestPersistence:
    """Test the on-disk layout"""

    def test_reopen(self, tmp_path, records_text):
        """Test a reopened store sees the same state"""
        directory = tmp_path / "annodb"
        first = AnnotationStore(directory)
        first.ingest_records(records_text)
        second = AnnotationStore(directory)
        assert len(second) == 3
        assert second.snapshot() == first.snapshot()

    def test_files(self, tmp_path, records_text):
        """Test the log and index files"""
        directory = tmp_path / "annodb"
        store = AnnotationStore(directory)
        store.ingest_records(records_text)
        store.ingest_records(records_text)
        log_lines = (directory / "records.log").read_text(encoding="utf-8").splitlines()
        assert len(log_lines) == 3
        assert (directory / "index.json").read_text(encoding="utf-8") == store.snapshot()
        index = json.loads(store.snapshot())
        assert [r["primary_uri"] for r in index["records"]] == [ATP, GLUCOSE, KEGG_GLUCOSE]

    def test_later_lines_supersede(self, tmp_path, records_text):
        """Test the merged record appended last wins on reload"""
        directory = tmp_path / "annodb"
        AnnotationStore(directory).ingest_records(records_text)
        AnnotationStore(directory).ingest_records([f"{ATP}\tadenosine 5'-triphosphate"])
        record = AnnotationStore(directory).record_for(ATP)
        assert record.names == ("ATP", "adenosine triphosphate", "adenosine 5'-triphosphate")

    def test_corrupt_log_line_skipped(self, tmp_path, records_text, caplog):
        """Test unreadable log lines are skipped on load"""
        directory = tmp_path / "annodb"
        AnnotationStore(directory).ingest_records(records_text)
        with open(directory / "records.log", "a", encoding="utf-8") as f:
            f.write("broken line\n")
        with caplog.at_level(logging.WARNING, logger="semantic_sbml.annodb"):
            store = AnnotationStore(directory)
        assert len(store) == 3
        assert "Skipping corrupt log line 4" in caplog.text
