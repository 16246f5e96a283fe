"""
Tests for rate-law classification and SBO term assignment.
"""

import logging
from dataclasses import replace

import pytest

from semantic_sbml.balancing import (
    apply_balanced,
    balance,
    build_problem,
    get_default_balancing_config,
)
from semantic_sbml.errors import MalformedRuleTable, NoKineticLaw
from semantic_sbml.formats import parse_shorthand
from semantic_sbml.model import parse_infix
from semantic_sbml.sbo import (
    ASSIGNED,
    SKIPPED,
    ParameterRole,
    RateLawClass,
    assign_sbo_terms,
    canonicalize,
    classify_rate_law,
    get_default_rule_table,
    parse_rule_table,
)

from .test_balancing import CLASH_MODEL, ENZYME_MODEL

SINGLE_REACTION = """\
@model:2.4.1=single
@compartments
  c=1
@species
  c:A=1
  c:B=1
@parameters
  k=1
  Vmax=2
  Km=0.5
@reactions
@rxn=r
  {equation}
  {law}
"""


def single(equation: str, law: str):
    return parse_shorthand(SINGLE_REACTION.format(equation=equation, law=law))


class TestCanonical:
    """Test order-insensitive canonical forms"""

    def test_commutative_forms_agree(self):
        """Test reordered sums and products compare equal"""
        left = canonicalize(parse_infix("kf*A - kr*B"))
        assert left == canonicalize(parse_infix("-(B*kr) + A*kf"))
        assert canonicalize(parse_infix("V*S/(K + S)")) == canonicalize(parse_infix("S*V/(S + K)"))

    def test_different_forms_differ(self):
        """Test structurally different laws stay apart"""
        assert canonicalize(parse_infix("k*A")) != canonicalize(parse_infix("k*A^2"))


class TestClassify:
    """Test rate-law families"""

    def test_mass_action_reversible(self, my_model):
        """Test kf*A - kr*B"""
        rate_law_class, roles = classify_rate_law(my_model.reactions[0], my_model)
        assert rate_law_class is RateLawClass.MASS_ACTION_REVERSIBLE
        assert roles == {
            "kf": ParameterRole.FORWARD_RATE_CONSTANT,
            "kr": ParameterRole.REVERSE_RATE_CONSTANT,
        }

    def test_mass_action_irreversible_order(self):
        """Test exponents must equal reactant stoichiometry"""
        doc = single("2 A -> B", "k*A^2")
        assert classify_rate_law(doc.reactions[0], doc)[0] is RateLawClass.MASS_ACTION_IRREVERSIBLE
        doc = single("2 A -> B", "k*A")
        assert classify_rate_law(doc.reactions[0], doc)[0] is RateLawClass.UNKNOWN

    def test_michaelis_menten(self):
        """Test V*S/(K + S) with a single substrate"""
        doc = single("A -> B", "Vmax*A/(Km + A)")
        rate_law_class, roles = classify_rate_law(doc.reactions[0], doc)
        assert rate_law_class is RateLawClass.MICHAELIS_MENTEN_IRREVERSIBLE
        assert roles == {
            "Vmax": ParameterRole.MAXIMAL_VELOCITY,
            "Km": ParameterRole.MICHAELIS_CONSTANT,
        }

    def test_unknown(self):
        """Test laws outside every family"""
        doc = single("A -> B", "k*A*B")
        assert classify_rate_law(doc.reactions[0], doc) == (RateLawClass.UNKNOWN, {})

    @pytest.mark.parametrize("law", ["k*A/0", "k*A*2^99999", "k*A*0^-2", "k*A*(0 - 2)^0.5"])
    def test_unfoldable_constants(self, law):
        """Test constants without a finite value keep the law unrecognized"""
        doc = single("A -> B", law)
        assert classify_rate_law(doc.reactions[0], doc) == (RateLawClass.UNKNOWN, {})
        updated, log = assign_sbo_terms(doc)
        assert updated == doc
        assert len(log) == 0

    def test_no_kinetic_law(self, my_model):
        """Test a reaction without a law cannot be classified"""
        reaction = replace(my_model.reactions[0], kinetic_law=None)
        with pytest.raises(NoKineticLaw):
            classify_rate_law(reaction, my_model)

    def test_modular_after_balancing(self, my_model):
        """Test inserted modular laws are recognized"""
        balanced = apply_balanced(my_model, balance(build_problem(my_model)))
        rate_law_class, roles = classify_rate_law(balanced.reactions[0], balanced)
        assert rate_law_class is RateLawClass.MODULAR_REVERSIBLE
        assert roles == {
            "kcat_f": ParameterRole.CATALYTIC_CONSTANT,
            "kcat_r": ParameterRole.CATALYTIC_CONSTANT,
            "KM_A": ParameterRole.MICHAELIS_CONSTANT,
            "KM_B": ParameterRole.MICHAELIS_CONSTANT,
        }

    def test_modular_with_inhibitor(self):
        """Test the inhibited modular law maps its inhibition constant"""
        doc = parse_shorthand(ENZYME_MODEL)
        config = get_default_balancing_config().model_copy(update={"modifier_mode": "inhibition"})
        balanced = apply_balanced(doc, balance(build_problem(doc, config=config)), config)
        rate_law_class, roles = classify_rate_law(balanced.reactions[0], balanced)
        assert rate_law_class is RateLawClass.MODULAR_REVERSIBLE
        assert roles["KI_E"] is ParameterRole.INHIBITION_CONSTANT

    def test_modular_with_renamed_locals(self):
        """Test a species named like a law constant keeps the law recognized"""
        doc = parse_shorthand(CLASH_MODEL.format(substrate="u"))
        balanced = apply_balanced(doc, balance(build_problem(doc)))
        rate_law_class, roles = classify_rate_law(balanced.reactions[0], balanced)
        assert rate_law_class is RateLawClass.MODULAR_REVERSIBLE
        assert roles == {
            "kcat_f": ParameterRole.CATALYTIC_CONSTANT,
            "kcat_r": ParameterRole.CATALYTIC_CONSTANT,
            "KM_u": ParameterRole.MICHAELIS_CONSTANT,
            "KM_P": ParameterRole.MICHAELIS_CONSTANT,
        }
        local_ids = [p.id for p in balanced.reactions[0].local_parameters]
        assert local_ids[-1] == "u_local"


class TestAssign:
    """Test SBO term assignment"""

    def test_mass_action_model(self, my_model):
        """Test the reaction and its global constants get SBO ids"""
        updated, log = assign_sbo_terms(my_model)
        assert updated.reactions[0].sbo == "SBO:0000042"
        assert {p.id: p.sbo for p in updated.parameters} == {
            "kf": "SBO:0000153",
            "kr": "SBO:0000156",
        }
        assert log.to_tsv().splitlines() == [
            "# target\trule\tsbo\tstatus\texisting",
            "reaction:reaction1\tMassActionReversible\tSBO:0000042\tassigned\t",
            "parameter:kf\tforward_rate_constant\tSBO:0000153\tassigned\t",
            "parameter:kr\treverse_rate_constant\tSBO:0000156\tassigned\t",
        ]

    def test_existing_ids_are_kept(self, my_model, caplog):
        """Test assignment never overwrites and logs the skip"""
        reaction = replace(my_model.reactions[0], sbo="SBO:0000001")
        doc = my_model.replace_element(reaction)
        with caplog.at_level(logging.WARNING, logger="semantic_sbml.sbo.assign"):
            updated, log = assign_sbo_terms(doc)
        assert updated.reactions[0].sbo == "SBO:0000001"
        (skipped,) = log.skipped
        assert (skipped.target, skipped.sbo, skipped.existing) == (
            "reaction:reaction1",
            "SBO:0000042",
            "SBO:0000001",
        )
        assert len(log.assigned) == 2
        assert "already SBO:0000001" in caplog.text

    def test_assignment_is_idempotent(self, my_model):
        """Test a second pass only skips"""
        once, _ = assign_sbo_terms(my_model)
        twice, log = assign_sbo_terms(once)
        assert twice == once
        assert {e.status for e in log.entries} == {SKIPPED}

    def test_local_parameters(self):
        """Test local parameters are addressed through their reaction"""
        doc = parse_shorthand(
            "@model:2.4.1=m\n@compartments\n  c=1\n@species\n  c:S=1\n  c:P=0\n"
            "@reactions\n@rxn=v\n  S -> P\n  V*S/(K + S)\n  @local V=2\n  @local K=0.5\n"
        )
        updated, log = assign_sbo_terms(doc)
        assert [(e.target, e.sbo, e.status) for e in log.entries] == [
            ("reaction:v", "SBO:0000029", ASSIGNED),
            ("reaction:v/local:V", "SBO:0000186", ASSIGNED),
            ("reaction:v/local:K", "SBO:0000027", ASSIGNED),
        ]
        assert [p.sbo for p in updated.reactions[0].local_parameters] == [
            "SBO:0000186",
            "SBO:0000027",
        ]

    def test_modular_locals(self, my_model):
        """Test balanced laws get the modular id and constant ids"""
        balanced = apply_balanced(my_model, balance(build_problem(my_model)))
        updated, log = assign_sbo_terms(balanced)
        reaction = updated.reactions[0]
        assert reaction.sbo == "SBO:0000527"
        sbo = {p.id: p.sbo for p in reaction.local_parameters}
        assert sbo == {
            "kcat_f": "SBO:0000025",
            "kcat_r": "SBO:0000025",
            "KM_A": "SBO:0000027",
            "KM_B": "SBO:0000027",
            "u": None,
        }

    def test_unknown_and_lawless_untouched(self, my_model):
        """Test unclassified reactions produce no log entries"""
        lawless = my_model.replace_element(replace(my_model.reactions[0], kinetic_law=None))
        updated, log = assign_sbo_terms(lawless)
        assert updated == lawless
        assert len(log) == 0
        unknown = single("A -> B", "k*A*B")
        assert len(assign_sbo_terms(unknown)[1]) == 0

    def test_custom_rules(self, my_model):
        """Test roles missing from the table are not assigned"""
        rules = parse_rule_table("ratelaw\tMassActionReversible\tSBO:0000042\n")
        updated, log = assign_sbo_terms(my_model, rules)
        assert updated.reactions[0].sbo == "SBO:0000042"
        assert [p.sbo for p in updated.parameters] == [None, None]
        assert len(log) == 1


class TestRuleTable:
    """Test rule table parsing"""

    def test_default_table(self):
        """Test the packaged table"""
        rules = get_default_rule_table()
        assert rules.for_class(RateLawClass.MODULAR_REVERSIBLE) == "SBO:0000527"
        assert rules.for_role(ParameterRole.INHIBITION_CONSTANT) == "SBO:0000261"
        assert len(rules.ids()) == 11

    @pytest.mark.parametrize(
        "text",
        [
            "ratelaw\tMassActionIrreversible\n",
            "ratelaw\tFoo\tSBO:0000001\n",
            "ratelaw\tUnknown\tSBO:0000001\n",
            "species\tFoo\tSBO:0000001\n",
            "parameter\tmaximal_velocity\tSBO:12\n",
            "parameter\tmaximal_velocity\tSBO:0000186\nparameter\tmaximal_velocity\tSBO:0000186\n",
        ],
    )
    def test_malformed(self, text):
        """Test each malformed table raises"""
        with pytest.raises(MalformedRuleTable):
            parse_rule_table(text)
