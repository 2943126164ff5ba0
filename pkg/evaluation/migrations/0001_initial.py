# Generated by Django 5.2.6 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='EvaluationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('corpus_name', models.CharField(max_length=255)),
                ('corpus_sha256', models.CharField(db_index=True, max_length=64)),
                ('hypotheses_name', models.CharField(max_length=255)),
                ('hypotheses_sha256', models.CharField(db_index=True, max_length=64)),
                ('language_pair', models.CharField(blank=True, max_length=16)),
                ('n_records', models.PositiveIntegerField(default=0)),
                ('n_excluded', models.PositiveIntegerField(default=0)),
                ('bleu_diff', models.FloatField(blank=True, null=True)),
                ('accuracy_diff', models.FloatField(blank=True, null=True)),
                ('report', models.JSONField(default=dict)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Evaluation run',
                'verbose_name_plural': 'Evaluation runs',
                'ordering': ['-created_at', '-id'],
            },
        ),
    ]
