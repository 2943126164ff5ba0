from django.contrib import admin
from .models import EvaluationRun


@admin.register(EvaluationRun)
class EvaluationRunAdmin(admin.ModelAdmin):
    list_display = ['id', 'hypotheses_name', 'corpus_name', 'language_pair', 'n_records', 'bleu_diff', 'accuracy_diff', 'created_at']
    list_filter = ['language_pair', 'created_at']
    search_fields = ['corpus_name', 'hypotheses_name', 'corpus_sha256', 'hypotheses_sha256']
    readonly_fields = ['corpus_sha256', 'hypotheses_sha256', 'report', 'created_at']
    ordering = ['-created_at']
