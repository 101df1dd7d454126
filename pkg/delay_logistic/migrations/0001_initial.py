# Generated by Django 5.2.5 on 2026-10-19 09:12

import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('r', models.FloatField()),
                ('alpha', models.FloatField()),
                ('history_spec', models.CharField(max_length=500)),
                ('t_end', models.FloatField()),
                ('rtol', models.FloatField()),
                ('atol', models.FloatField()),
                ('method', models.CharField(default='DOP853', max_length=20)),
                ('status', models.CharField(choices=[('completed', 'Completed'), ('blown_up', 'Blown up'), ('aborted', 'Aborted')], max_length=20)),
                ('t_final', models.FloatField()),
                ('t_blowup', models.FloatField(blank=True, null=True)),
                ('bracket_width', models.FloatField(blank=True, null=True)),
                ('lower_bound', models.FloatField(blank=True, null=True)),
                ('abort_reason', models.CharField(blank=True, max_length=100, null=True)),
                ('n_steps', models.IntegerField(default=0)),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'db_table': 'simulation_run',
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='SuiteRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('suite', models.CharField(max_length=50)),
                ('seed', models.DecimalField(decimal_places=0, max_digits=20)),
                ('overall_pass', models.BooleanField(default=False)),
                ('case_count', models.IntegerField(default=0)),
                ('failure_count', models.IntegerField(default=0)),
                ('report', models.JSONField()),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'db_table': 'suite_run',
                'ordering': ['-created_at'],
            },
        ),
    ]
