# Generated by Django 5.2.7 on 2026-10-16 09:12

import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Certificate',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('analyze', 'Analyze'), ('sweep', 'Sweep'), ('verify', 'Verify')], max_length=10)),
                ('kind', models.CharField(blank=True, max_length=40)),
                ('params', models.JSONField(blank=True, default=dict)),
                ('schema', models.CharField(max_length=20)),
                ('epsilon', models.CharField(blank=True, max_length=200)),
                ('bound', models.CharField(blank=True, max_length=200)),
                ('holds', models.BooleanField()),
                ('payload', models.JSONField(default=dict)),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
            },
        ),
    ]
