from rest_framework import serializers

from .models import EvaluationRun
from .report import CATEGORIES, SPLITS


class MetricTripletSerializer(serializers.Serializer):
    correct = serializers.FloatField()
    wrong = serializers.FloatField()
    diff = serializers.FloatField()


class ReportCellSerializer(serializers.Serializer):
    split = serializers.ChoiceField(choices=SPLITS)
    category = serializers.ChoiceField(choices=CATEGORIES)
    n_records = serializers.IntegerField(min_value=0)
    n_terms = serializers.IntegerField(min_value=0)
    matched_correct = serializers.IntegerField(min_value=0)
    matched_wrong = serializers.IntegerField(min_value=0)
    bleu = MetricTripletSerializer(allow_null=True, required=False)
    accuracy = MetricTripletSerializer(allow_null=True, required=False)
    bleu_correct_degenerate = serializers.CharField(allow_null=True, required=False)
    bleu_wrong_degenerate = serializers.CharField(allow_null=True, required=False)

    def validate(self, attrs):
        if attrs['matched_correct'] > attrs['n_terms'] or attrs['matched_wrong'] > attrs['n_terms']:
            raise serializers.ValidationError('matched counts cannot exceed n_terms')
        return attrs


class EvalReportSerializer(serializers.Serializer):
    """
    Full-precision document form of an evaluation report
    """
    corpus = serializers.CharField(allow_blank=True)
    hypotheses = serializers.CharField(allow_blank=True)
    language_pair = serializers.CharField(allow_blank=True)
    n_records = serializers.IntegerField(min_value=0)
    n_excluded = serializers.IntegerField(min_value=0)
    cells = ReportCellSerializer(many=True)

    def validate_cells(self, cells):
        keys = [(cell['split'], cell['category']) for cell in cells]
        if len(set(keys)) != len(keys):
            raise serializers.ValidationError('duplicate report cell')
        missing = {(s, c) for s in SPLITS for c in CATEGORIES} - set(keys)
        if missing:
            raise serializers.ValidationError(f"missing report cells: {sorted(missing)}")
        return cells


class EvaluationRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = EvaluationRun
        fields = [
            'id', 'corpus_name', 'corpus_sha256', 'hypotheses_name', 'hypotheses_sha256',
            'language_pair', 'n_records', 'n_excluded', 'bleu_diff', 'accuracy_diff', 'created_at',
        ]
        read_only_fields = fields
